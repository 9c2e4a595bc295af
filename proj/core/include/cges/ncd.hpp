#pragma once

#include <cstdint>
#include <vector>

#include "cges/dataset.hpp"
#include "cges/graph.hpp"
#include "cges/measures.hpp"
#include "cges/neural.hpp"
#include "cges/search.hpp"

namespace cges {

/// Configuration of one neural conditional dependence evaluation. Test
/// function networks are fixed at 2x20 without batch norm; regressor networks
/// take their depth/width from here and add batch norm before each ReLU.
/// Spectral normalization is on everywhere.
struct NcdConfig {
    MlpSpec test_fn_spec{.input_dim = 1,
                         .hidden_layers = 2,
                         .hidden_width = 20,
                         .use_batch_norm = false,
                         .use_spectral_norm = true};
    MlpSpec regressor_spec{.input_dim = 1,
                           .hidden_layers = 3,
                           .hidden_width = 40,
                           .use_batch_norm = true,
                           .use_spectral_norm = true};
    double lr = 0.01;
    int outer_steps = 20;             // test-function updates (T_t)
    int inner_steps = 5;              // regressor updates per outer step (T_r)
    double tau = 0.005;
    double correlation_epsilon = 1e-8;
    std::uint64_t seed = 0;
    int restarts = 2;
};

/// Squared sample correlation of the residuals f - h and g - l, with
/// `epsilon` added to each variance in the denominator.
double residual_correlation(const Eigen::VectorXd& f_vals,
                            const Eigen::VectorXd& h_vals,
                            const Eigen::VectorXd& g_vals,
                            const Eigen::VectorXd& l_vals, double epsilon);

/// Value plus gradients with respect to the residual vectors u = f - h and
/// v = g - l; used by the ascent step and exposed for gradient checks.
double residual_correlation_grad(const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, double epsilon,
                                 Eigen::VectorXd& grad_u,
                                 Eigen::VectorXd& grad_v);

/// NCD score for column groups xs, ys given zs (variable indices; each group
/// is the concatenation of its variables' columns). `seed` is the fully
/// derived per-query seed. Optionally records the objective after each outer
/// step.
double ncd_score_vars(const Dataset& data, const std::vector<int>& xs,
                      const std::vector<int>& ys, const std::vector<int>& zs,
                      const NcdConfig& config, std::uint64_t seed,
                      std::vector<double>* trajectory = nullptr);

/// NCD score of variables x and y given z, with the per-query seed derived
/// from (config.seed, x, y, z).
double ncd_score(const Dataset& data, int x, int y, const std::vector<int>& z,
                 const NcdConfig& config,
                 std::vector<double>* trajectory = nullptr);

/// Average NCD of each node against its non-descendants (parents excluded)
/// given its parents. Near zero when the data satisfies the independences the
/// DAG entails; lower is better.
double global_score(const Dataset& data, const Dag& dag,
                    const NcdConfig& config);

/// DependenceMeasure adapter so NCD plugs into the search as a local score.
class NcdMeasure final : public DependenceMeasure {
public:
    NcdMeasure(const Dataset& dataset, NcdConfig config)
        : data_(dataset), config_(config) {}
    double evaluate(int x, int y, const std::vector<int>& z) const override {
        return ncd_score(data_, x, y, z, config_);
    }
    std::string name() const override { return "ncd"; }
    const NcdConfig& config() const { return config_; }

private:
    const Dataset& data_;
    NcdConfig config_;
};

struct NcdDiscoveryResult {
    Cpdag cpdag;
    GesTrace trace;
    std::vector<double> global_scores;  // one per restart
    int best_restart = 0;
};

/// Runs the search `config.restarts` times with independently derived
/// initialization seeds and keeps the run whose representative DAG has the
/// lowest global score.
NcdDiscoveryResult discover_with_restarts(const Dataset& data,
                                          const NcdConfig& config,
                                          const GesConfig& ges_config);

}  // namespace cges
