#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cges/dataset.hpp"
#include "cges/graph.hpp"
#include "cges/measures.hpp"

namespace cges {

struct GesConfig {
    double tau = 0.1;                  // decision threshold, > 0
    std::optional<int> max_aux_size;   // cap on |T| / |H|; unlimited if unset
    std::uint64_t seed = 0;            // forwarded to stochastic measures
    unsigned scoring_threads = 1;      // operator-scoring fan-out per step
};

/// Insert(x, y, T) or Delete(x, y, H). aux is sorted ascending.
struct EdgeOperator {
    enum class Kind { Insert, Delete };
    Kind kind = Kind::Insert;
    int x = -1;
    int y = -1;
    std::vector<int> aux;

    std::string describe() const;
    bool operator==(const EdgeOperator&) const = default;
};

enum class SearchPhase { Forward, Backward };

struct TraceStep {
    SearchPhase phase = SearchPhase::Forward;
    EdgeOperator op;
    double score = 0.0;
    int adjacency_count = 0;  // after applying the operator
};

struct GesTrace {
    std::vector<TraceStep> steps;
};

/// Memoizes measure evaluations within one run; keys are (x, y, sorted z).
using ScoreCache = std::map<std::tuple<int, int, std::vector<int>>, double>;

/// All valid Insert operators in deterministic order: x ascending, y
/// ascending, subsets of the eligible neighbor set in mask order over the
/// sorted elements.
std::vector<EdgeOperator> enumerate_inserts(
    const Cpdag& cpdag, std::optional<int> max_aux_size = {});

/// All valid Delete operators; an undirected edge yields both orders, a
/// directed edge only (parent, child).
std::vector<EdgeOperator> enumerate_deletes(
    const Cpdag& cpdag, std::optional<int> max_aux_size = {});

/// Parent set of y in the representative DAG induced by the operator:
/// Insert: Pa(y) + na_set(y,x) + T;  Delete: (Pa(y) + na_set(y,x) \ H) \ {x}.
/// Sorted ascending.
std::vector<int> conditioning_set(const Cpdag& cpdag, const EdgeOperator& op);

/// Applies the operator's edge modifications and re-completes the resulting
/// PDAG to a CPDAG (consistent extension, then compelled-edge labeling).
Cpdag apply_operator(const Cpdag& cpdag, const EdgeOperator& op);

struct StepResult {
    Cpdag cpdag;
    bool applied = false;
};

/// One forward update: scores every valid insert, applies the best when its
/// score exceeds tau. Ties go to the earliest operator in enumeration order.
StepResult fes_step(const Cpdag& cpdag, const DependenceMeasure& measure,
                    const GesConfig& config, GesTrace* trace = nullptr,
                    ScoreCache* cache = nullptr);

/// One backward update: applies the lowest-scoring valid delete when its
/// score is below tau. The running minimum starts at +infinity.
StepResult bes_step(const Cpdag& cpdag, const DependenceMeasure& measure,
                    const GesConfig& config, GesTrace* trace = nullptr,
                    ScoreCache* cache = nullptr);

/// Full run: forward phase to a fixed point, then backward phase, starting
/// from the empty CPDAG.
std::pair<Cpdag, GesTrace> run_ges(int variable_count,
                                   const DependenceMeasure& measure,
                                   const GesConfig& config);
std::pair<Cpdag, GesTrace> run_ges(const Dataset& dataset,
                                   const DependenceMeasure& measure,
                                   const GesConfig& config);

}  // namespace cges
