#include "cges/metrics.hpp"

#include "cges/errors.hpp"

namespace cges {

namespace {

enum class PairStatus { None, Undirected, Forward, Backward };

PairStatus pair_status(const Cpdag& graph, int a, int b) {
    if (graph.has_undirected(a, b)) return PairStatus::Undirected;
    if (graph.has_directed(a, b)) return PairStatus::Forward;
    if (graph.has_directed(b, a)) return PairStatus::Backward;
    return PairStatus::None;
}

void check_counts(const Cpdag& estimate, const Cpdag& truth) {
    if (estimate.node_count() != truth.node_count())
        throw NodeCountMismatch("metrics: estimate has " +
                                std::to_string(estimate.node_count()) +
                                " nodes, truth has " +
                                std::to_string(truth.node_count()));
}

}  // namespace

int shd_cpdag(const Cpdag& estimate, const Cpdag& truth) {
    check_counts(estimate, truth);
    const int n = truth.node_count();
    int distance = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const PairStatus es = pair_status(estimate, a, b);
            const PairStatus ts = pair_status(truth, a, b);
            if (es == ts) continue;
            // Addition/deletion or any orientation fix costs one.
            ++distance;
        }
    }
    return distance;
}

EvalReport f1_cpdag(const Cpdag& estimate, const Cpdag& truth) {
    check_counts(estimate, truth);
    const int n = truth.node_count();
    auto entry = [](const Cpdag& g, int a, int b) {
        return g.has_directed(a, b) || g.has_undirected(a, b);
    };
    EvalReport report;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const bool in_truth = entry(truth, a, b);
            const bool in_estimate = entry(estimate, a, b);
            report.true_entries += in_truth;
            report.estimated_entries += in_estimate;
            report.correct_entries += in_truth && in_estimate;
        }
    }
    const int tp = report.correct_entries;
    if (report.estimated_entries > 0)
        report.precision = static_cast<double>(tp) / report.estimated_entries;
    else
        report.precision = report.true_entries == 0 ? 1.0 : 0.0;
    if (report.true_entries > 0)
        report.recall = static_cast<double>(tp) / report.true_entries;
    else
        report.recall = report.estimated_entries == 0 ? 1.0 : 0.0;
    report.f1 = (report.precision > 0.0 && report.recall > 0.0)
                    ? 2.0 * report.precision * report.recall /
                          (report.precision + report.recall)
                    : 0.0;
    if (report.true_entries == 0 && report.estimated_entries == 0)
        report.f1 = 1.0;
    return report;
}

EvalReport evaluate_cpdag(const Cpdag& estimate, const Cpdag& truth) {
    EvalReport report = f1_cpdag(estimate, truth);
    report.shd = shd_cpdag(estimate, truth);
    return report;
}

}  // namespace cges
