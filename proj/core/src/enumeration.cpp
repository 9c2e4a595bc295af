#include "cges/enumeration.hpp"

#include <cmath>

#include "cges/errors.hpp"
#include "cges/measures.hpp"
#include "cges/rng.hpp"
#include "cges/search.hpp"
#include "cges/serialize.hpp"
#include "cges/synth.hpp"

namespace cges {

std::vector<Dag> enumerate_all_dags(int node_count) {
    if (node_count < 1) throw Error("enumerate_all_dags: need >= 1 node");
    if (node_count > 5)
        throw Error("enumerate_all_dags: exhaustive enumeration capped at 5 nodes");
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < node_count; ++a)
        for (int b = a + 1; b < node_count; ++b) pairs.emplace_back(a, b);
    const std::size_t pair_count = pairs.size();
    std::vector<Dag> out;
    std::vector<int> state(pair_count, 0);  // 0 none, 1 a->b, 2 b->a
    for (;;) {
        // Acyclicity via Kahn on the candidate adjacency.
        std::vector<std::vector<int>> children(node_count);
        std::vector<int> indegree(node_count, 0);
        for (std::size_t k = 0; k < pair_count; ++k) {
            if (state[k] == 1) {
                children[pairs[k].first].push_back(pairs[k].second);
                ++indegree[pairs[k].second];
            } else if (state[k] == 2) {
                children[pairs[k].second].push_back(pairs[k].first);
                ++indegree[pairs[k].first];
            }
        }
        std::vector<int> stack;
        for (int v = 0; v < node_count; ++v)
            if (indegree[v] == 0) stack.push_back(v);
        int drained = 0;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++drained;
            for (int c : children[v])
                if (--indegree[c] == 0) stack.push_back(c);
        }
        if (drained == node_count) {
            Dag dag(node_count);
            for (std::size_t k = 0; k < pair_count; ++k) {
                if (state[k] == 1)
                    dag.add_edge(pairs[k].first, pairs[k].second);
                else if (state[k] == 2)
                    dag.add_edge(pairs[k].second, pairs[k].first);
            }
            out.push_back(std::move(dag));
        }
        // Next assignment in base 3.
        std::size_t at = 0;
        while (at < pair_count && state[at] == 2) state[at++] = 0;
        if (at == pair_count) break;
        ++state[at];
    }
    return out;
}

namespace {

void check_one(const Dag& truth, double tau, OracleCheckReport& report) {
    const OracleMeasure measure(truth);
    GesConfig config;
    config.tau = tau;
    const auto [estimate, trace] = run_ges(truth.node_count(), measure, config);
    ++report.total;
    if (estimate == dag_to_cpdag(truth))
        ++report.recovered;
    else
        report.failures.push_back(dag_to_json(truth));
}

}  // namespace

OracleCheckReport oracle_recovery_exhaustive(int max_nodes, double tau) {
    if (max_nodes < 1 || max_nodes > 5)
        throw Error("oracle_recovery_exhaustive: max_nodes must be 1..5");
    OracleCheckReport report;
    for (int n = 1; n <= max_nodes; ++n)
        for (const Dag& truth : enumerate_all_dags(n))
            check_one(truth, tau, report);
    return report;
}

OracleCheckReport oracle_recovery_random(int trials, int node_count,
                                         double expected_degree, double tau,
                                         std::uint64_t seed) {
    if (node_count > 8)
        throw Error("oracle_recovery_random: capped at 8 nodes");
    OracleCheckReport report;
    for (int t = 0; t < trials; ++t) {
        const Dag truth =
            sample_er_dag(node_count, expected_degree, mix_seed(seed, t));
        check_one(truth, tau, report);
    }
    return report;
}

}  // namespace cges
