#pragma once

#include "cges/graph.hpp"

namespace cges {

struct EvalReport {
    int shd = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int true_entries = 0;      // adjacency-matrix entries of the truth
    int estimated_entries = 0;
    int correct_entries = 0;
};

/// Structural Hamming distance between CPDAGs: per unordered pair, one unit
/// for a missing/extra adjacency and one unit for any orientation-status
/// mismatch on a shared adjacency.
int shd_cpdag(const Cpdag& estimate, const Cpdag& truth);

/// Precision/recall/F1 over adjacency-matrix entries, with undirected edges
/// expanded to both directed entries. A directed estimate of an undirected
/// truth edge counts as one correct entry out of two.
EvalReport f1_cpdag(const Cpdag& estimate, const Cpdag& truth);

/// f1_cpdag plus the SHD, in one report.
EvalReport evaluate_cpdag(const Cpdag& estimate, const Cpdag& truth);

}  // namespace cges
