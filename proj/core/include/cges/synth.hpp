#pragma once

#include <cstdint>
#include <string>

#include "cges/dataset.hpp"
#include "cges/graph.hpp"

namespace cges {

enum class ScmModel { PnlGp, PnlMult, LinearGauss };

ScmModel scm_model_from_string(const std::string& name);
std::string to_string(ScmModel model);

/// Erdos-Renyi DAG: a uniformly random ordering, each forward pair kept with
/// probability expected_degree / (d - 1).
Dag sample_er_dag(int node_count, double expected_degree, std::uint64_t seed);

/// One joint draw of GP function values at the given input points, zero mean,
/// squared-exponential kernel exp(-|u-v|^2 / (2 bandwidth^2)). Exact via a
/// jittered Cholesky factor up to 2000 points, random cosine features above.
Eigen::VectorXd sample_gp_function(const Eigen::MatrixXd& inputs,
                                   double bandwidth, std::uint64_t seed);

/// Post-nonlinear model with GP mechanisms: roots ~ U[-1,1], non-roots
/// X_i = sigmoid(gp(parents) + Laplace(0, b_i)) with b_i ~ U[0,1].
Dataset sample_pnl_gp(const Dag& dag, int n, std::uint64_t seed);

/// Multiplicative post-nonlinear model: roots ~ U[0,2], non-roots
/// X_i = exp(log(sum(parents)) + N_i) with N_i ~ |Normal(0, s2_i)|,
/// s2_i ~ U[0,1].
Dataset sample_pnl_mult(const Dag& dag, int n, std::uint64_t seed);

/// Linear additive-noise model: X_i = sum_j w_ji X_j + Normal(0, noise_sd^2),
/// |w| ~ U[coeff_lo, coeff_hi] with random sign. coeff_lo must stay away
/// from zero.
Dataset sample_linear_gauss(const Dag& dag, int n, std::uint64_t seed,
                            double coeff_lo = 0.5, double coeff_hi = 1.5,
                            double noise_sd = 0.5);

Dataset sample_scm(ScmModel model, const Dag& dag, int n, std::uint64_t seed);

/// The invertible output maps of the two PNL mechanisms, exposed for direct
/// checks of the composed transforms.
double pnl_gp_output(double propagated, double noise);    // sigmoid(u + e)
double pnl_mult_output(double parent_sum, double noise);  // exp(log(s) + e)

}  // namespace cges
