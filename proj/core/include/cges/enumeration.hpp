#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cges/graph.hpp"

namespace cges {

/// Every labeled DAG on `node_count` nodes (3 states per unordered pair,
/// cyclic candidates dropped). Counts grow as 1, 3, 25, 543, 29281; intended
/// for node_count <= 5.
std::vector<Dag> enumerate_all_dags(int node_count);

struct OracleCheckReport {
    long total = 0;
    long recovered = 0;
    std::vector<std::string> failures;  // serialized offending truth DAGs

    bool all_recovered() const { return total > 0 && recovered == total; }
    double fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(recovered) / total;
    }
};

/// Runs the search with the d-separation oracle measure on every DAG with
/// 1..max_nodes nodes and counts exact CPDAG recoveries.
OracleCheckReport oracle_recovery_exhaustive(int max_nodes, double tau);

/// Same over `trials` random ER DAGs with the given size and expected degree.
OracleCheckReport oracle_recovery_random(int trials, int node_count,
                                         double expected_degree, double tau,
                                         std::uint64_t seed);

}  // namespace cges
