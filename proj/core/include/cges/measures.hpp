#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cges/dataset.hpp"
#include "cges/graph.hpp"

namespace cges {

/// Everything a data-driven measure needs for one evaluation: the bound
/// sample and the root seed from which per-query streams are derived.
struct MeasureContext {
    const Dataset& dataset;
    std::uint64_t seed = 0;
};

/// Conditional dependence statistic contract: large values indicate
/// dependence of x and y given z, values near zero indicate independence.
/// Evaluations must be pure given (dataset, seed, query) so they may run
/// concurrently for distinct queries.
class DependenceMeasure {
public:
    virtual ~DependenceMeasure() = default;
    /// x, y are variable indices; z lists conditioning variables (sorted,
    /// never containing x or y).
    virtual double evaluate(int x, int y, const std::vector<int>& z) const = 0;
    virtual std::string name() const = 0;
};

struct RcdResult {
    double raw = 0.0;      // estimator value before clamping
    double value = 0.0;    // clamped to [0, 1]
};

/// Nearest-neighbor rank statistic of conditional dependence. The response y
/// must be one-dimensional; x and z may span several columns. For empty z the
/// unconditional variant of the same statistic family is used. Rank and
/// nearest-neighbor ties are broken uniformly at random from the per-query
/// stream.
RcdResult rcd_statistic(const MeasureContext& ctx, int x, int y,
                        const std::vector<int>& z);

class RcdMeasure final : public DependenceMeasure {
public:
    RcdMeasure(const Dataset& dataset, std::uint64_t seed)
        : ctx_{dataset, seed} {}
    double evaluate(int x, int y, const std::vector<int>& z) const override {
        return rcd_statistic(ctx_, x, y, z).value;
    }
    std::string name() const override { return "rcd"; }

private:
    MeasureContext ctx_;
};

/// Returns 0 when the truth DAG d-separates x and y given z, else 1. Exact
/// stand-in for a converged measure; used for optimality checks.
class OracleMeasure final : public DependenceMeasure {
public:
    explicit OracleMeasure(Dag truth) : truth_(std::move(truth)) {}
    double evaluate(int x, int y, const std::vector<int>& z) const override;
    std::string name() const override { return "oracle"; }
    const Dag& truth() const { return truth_; }

private:
    Dag truth_;
};

/// Squared sample partial correlation of x and y given z, via regression
/// residuals. Smoke-test measure for roughly linear-Gaussian data.
double gauss_partial_corr(const MeasureContext& ctx, int x, int y,
                          const std::vector<int>& z);

class GaussPartialCorrMeasure final : public DependenceMeasure {
public:
    explicit GaussPartialCorrMeasure(const Dataset& dataset)
        : ctx_{dataset, 0} {}
    double evaluate(int x, int y, const std::vector<int>& z) const override {
        return gauss_partial_corr(ctx_, x, y, z);
    }
    std::string name() const override { return "pcorr"; }

private:
    MeasureContext ctx_;
};

}  // namespace cges
