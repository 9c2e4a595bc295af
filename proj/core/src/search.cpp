#include "cges/search.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "cges/errors.hpp"
#include "cges/parallel.hpp"

namespace cges {

std::string EdgeOperator::describe() const {
    std::ostringstream out;
    out << (kind == Kind::Insert ? "Insert(" : "Delete(") << x << ", " << y
        << ", {";
    for (std::size_t i = 0; i < aux.size(); ++i)
        out << (i ? ", " : "") << aux[i];
    out << "})";
    return out.str();
}

namespace {

/// Subsets of `base` (sorted) in mask-counting order, popcount-capped.
template <typename Fn>
void for_each_subset(const std::vector<int>& base,
                     std::optional<int> max_size, Fn&& fn) {
    const int k = static_cast<int>(base.size());
    if (k > 20) throw Error("operator enumeration: neighbor set too large (cap |T|/|H|)");
    const std::uint32_t limit = 1u << k;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (max_size && std::popcount(mask) > *max_size) continue;
        std::vector<int> subset;
        subset.reserve(std::popcount(mask));
        for (int b = 0; b < k; ++b)
            if (mask & (1u << b)) subset.push_back(base[b]);
        fn(std::move(subset));
    }
}

}  // namespace

std::vector<EdgeOperator> enumerate_inserts(const Cpdag& cpdag,
                                            std::optional<int> max_aux_size) {
    const int n = cpdag.node_count();
    std::vector<EdgeOperator> out;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (x == y || cpdag.adjacent(x, y)) continue;
            std::vector<int> eligible;
            for (int w : cpdag.neighbors(y))
                if (!cpdag.adjacent(w, x)) eligible.push_back(w);
            for_each_subset(eligible, max_aux_size, [&](std::vector<int> t) {
                const std::set<int> ts(t.begin(), t.end());
                if (!validity_insert(cpdag, x, y, ts)) return;
                out.push_back({EdgeOperator::Kind::Insert, x, y, std::move(t)});
            });
        }
    }
    return out;
}

std::vector<EdgeOperator> enumerate_deletes(const Cpdag& cpdag,
                                            std::optional<int> max_aux_size) {
    const int n = cpdag.node_count();
    std::vector<EdgeOperator> out;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            // Directed edges only in their own orientation; undirected both ways.
            if (!cpdag.has_directed(x, y) && !cpdag.has_undirected(x, y)) continue;
            std::vector<int> eligible;
            for (int w : cpdag.neighbors(y))
                if (cpdag.adjacent(w, x)) eligible.push_back(w);
            for_each_subset(eligible, max_aux_size, [&](std::vector<int> h) {
                const std::set<int> hs(h.begin(), h.end());
                if (!validity_delete(cpdag, x, y, hs)) return;
                out.push_back({EdgeOperator::Kind::Delete, x, y, std::move(h)});
            });
        }
    }
    return out;
}

std::vector<int> conditioning_set(const Cpdag& cpdag, const EdgeOperator& op) {
    std::set<int> cond(cpdag.parents(op.y).begin(), cpdag.parents(op.y).end());
    const std::set<int> na = na_set(cpdag, op.y, op.x);
    if (op.kind == EdgeOperator::Kind::Insert) {
        cond.insert(na.begin(), na.end());
        cond.insert(op.aux.begin(), op.aux.end());
    } else {
        std::set<int> kept = na;
        for (int h : op.aux) kept.erase(h);
        cond.insert(kept.begin(), kept.end());
        cond.erase(op.x);
    }
    return {cond.begin(), cond.end()};
}

Cpdag apply_operator(const Cpdag& cpdag, const EdgeOperator& op) {
    Cpdag work = cpdag;
    if (op.kind == EdgeOperator::Kind::Insert) {
        work.add_directed(op.x, op.y);
        for (int t : op.aux) work.orient(t, op.y);
    } else {
        work.remove_between(op.x, op.y);
        for (int h : op.aux) {
            work.orient(op.y, h);
            if (work.has_undirected(op.x, h)) work.orient(op.x, h);
        }
    }
    return dag_to_cpdag(pdag_to_dag(work));
}

namespace {

std::vector<double> score_operators(const Cpdag& cpdag,
                                    const std::vector<EdgeOperator>& ops,
                                    const DependenceMeasure& measure,
                                    const GesConfig& config,
                                    ScoreCache* cache) {
    std::vector<std::vector<int>> cond(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i)
        cond[i] = conditioning_set(cpdag, ops[i]);

    std::vector<double> scores(ops.size(), 0.0);
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (cache) {
            const auto it = cache->find({ops[i].x, ops[i].y, cond[i]});
            if (it != cache->end()) {
                scores[i] = it->second;
                continue;
            }
        }
        misses.push_back(i);
    }
    parallel_for(misses.size(), config.scoring_threads, [&](std::size_t k) {
        const std::size_t i = misses[k];
        try {
            scores[i] = measure.evaluate(ops[i].x, ops[i].y, cond[i]);
        } catch (const DegenerateDenominator&) {
            scores[i] = 0.0;  // constant response: treat as independence
        } catch (const std::exception& e) {
            throw Error("measure '" + measure.name() + "' failed for " +
                        ops[i].describe() + ": " + e.what());
        }
    });
    if (cache)
        for (std::size_t i : misses)
            (*cache)[{ops[i].x, ops[i].y, cond[i]}] = scores[i];
    return scores;
}

}  // namespace

StepResult fes_step(const Cpdag& cpdag, const DependenceMeasure& measure,
                    const GesConfig& config, GesTrace* trace,
                    ScoreCache* cache) {
    const std::vector<EdgeOperator> ops =
        enumerate_inserts(cpdag, config.max_aux_size);
    const std::vector<double> scores =
        score_operators(cpdag, ops, measure, config, cache);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (scores[i] > best) {
            best = scores[i];
            best_index = i;
        }
    }
    if (ops.empty() || best <= config.tau) return {cpdag, false};
    Cpdag next = apply_operator(cpdag, ops[best_index]);
    if (trace)
        trace->steps.push_back({SearchPhase::Forward, ops[best_index], best,
                                next.adjacency_count()});
    return {std::move(next), true};
}

StepResult bes_step(const Cpdag& cpdag, const DependenceMeasure& measure,
                    const GesConfig& config, GesTrace* trace,
                    ScoreCache* cache) {
    const std::vector<EdgeOperator> ops =
        enumerate_deletes(cpdag, config.max_aux_size);
    const std::vector<double> scores =
        score_operators(cpdag, ops, measure, config, cache);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (scores[i] < best) {
            best = scores[i];
            best_index = i;
        }
    }
    if (ops.empty() || best >= config.tau) return {cpdag, false};
    Cpdag next = apply_operator(cpdag, ops[best_index]);
    if (trace)
        trace->steps.push_back({SearchPhase::Backward, ops[best_index], best,
                                next.adjacency_count()});
    return {std::move(next), true};
}

std::pair<Cpdag, GesTrace> run_ges(int variable_count,
                                   const DependenceMeasure& measure,
                                   const GesConfig& config) {
    if (variable_count < 1) throw Error("run_ges: need at least one variable");
    if (config.tau <= 0.0) throw Error("run_ges: tau must be positive");
    Cpdag current(variable_count);
    GesTrace trace;
    ScoreCache cache;
    for (;;) {
        StepResult step = fes_step(current, measure, config, &trace, &cache);
        if (!step.applied) break;
        current = std::move(step.cpdag);
    }
    for (;;) {
        StepResult step = bes_step(current, measure, config, &trace, &cache);
        if (!step.applied) break;
        current = std::move(step.cpdag);
    }
    return {std::move(current), std::move(trace)};
}

std::pair<Cpdag, GesTrace> run_ges(const Dataset& dataset,
                                   const DependenceMeasure& measure,
                                   const GesConfig& config) {
    return run_ges(dataset.variable_count(), measure, config);
}

}  // namespace cges
