#include "cges/synth.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "cges/errors.hpp"
#include "cges/rng.hpp"
#include "cges/serialize.hpp"

namespace cges {

namespace {

constexpr int kExactGpLimit = 2000;
constexpr int kRandomFeatureCount = 2048;

}  // namespace

ScmModel scm_model_from_string(const std::string& name) {
    if (name == "pnl-gp") return ScmModel::PnlGp;
    if (name == "pnl-mult") return ScmModel::PnlMult;
    if (name == "linear") return ScmModel::LinearGauss;
    throw Error("unknown model '" + name + "' (pnl-gp | pnl-mult | linear)");
}

std::string to_string(ScmModel model) {
    switch (model) {
        case ScmModel::PnlGp: return "pnl-gp";
        case ScmModel::PnlMult: return "pnl-mult";
        case ScmModel::LinearGauss: return "linear";
    }
    return "?";
}

Dag sample_er_dag(int node_count, double expected_degree, std::uint64_t seed) {
    if (node_count < 2) throw Error("sample_er_dag: need at least 2 nodes");
    if (expected_degree <= 0.0 || expected_degree > node_count - 1)
        throw Error("sample_er_dag: expected_degree must lie in (0, d-1]");
    Rng rng(mix_seed(seed, 0x4552));
    const std::vector<int> order = rng.permutation(node_count);
    const double p = expected_degree / (node_count - 1);
    Dag dag(node_count);
    for (int i = 0; i < node_count; ++i)
        for (int j = i + 1; j < node_count; ++j)
            if (rng.uniform() < p) dag.add_edge(order[i], order[j]);
    return dag;
}

Eigen::VectorXd sample_gp_function(const Eigen::MatrixXd& inputs,
                                   double bandwidth, std::uint64_t seed) {
    const int n = static_cast<int>(inputs.rows());
    const int p = static_cast<int>(inputs.cols());
    if (p < 1) throw Error("sample_gp_function: need at least one input column");
    if (bandwidth <= 0.0) throw Error("sample_gp_function: bandwidth must be positive");
    Rng rng(mix_seed(seed, 0x4750));

    if (n > kExactGpLimit) {
        // Random cosine features matched to the squared-exponential spectrum:
        // f(u) = sqrt(2/D) * sum_k w_k cos(omega_k . u + b_k),
        // omega ~ Normal(0, bandwidth^-2 I), b ~ U[0, 2pi), w ~ Normal(0,1).
        const int features = kRandomFeatureCount;
        Eigen::MatrixXd omega(p, features);
        Eigen::VectorXd phase(features), weight(features);
        for (int k = 0; k < features; ++k) {
            for (int d = 0; d < p; ++d) omega(d, k) = rng.normal() / bandwidth;
            phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
            weight[k] = rng.normal();
        }
        Eigen::MatrixXd projected = inputs * omega;  // n x features
        projected.rowwise() += phase.transpose();
        return std::sqrt(2.0 / features) * (projected.array().cos().matrix() * weight);
    }

    Eigen::MatrixXd kernel(n, n);
    const double inv_two_bw2 = 1.0 / (2.0 * bandwidth * bandwidth);
    for (int i = 0; i < n; ++i) {
        kernel(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double k =
                std::exp(-(inputs.row(i) - inputs.row(j)).squaredNorm() * inv_two_bw2);
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }
    Eigen::VectorXd white(n);
    for (int i = 0; i < n; ++i) white[i] = rng.normal();
    for (double jitter = 1e-8; jitter <= 1e-4 + 1e-12; jitter *= 10.0) {
        Eigen::MatrixXd jittered = kernel;
        jittered.diagonal().array() += jitter;
        const Eigen::LLT<Eigen::MatrixXd> llt(jittered);
        if (llt.info() == Eigen::Success) return llt.matrixL() * white;
    }
    throw FactorizationFailure("sample_gp_function: kernel not factorizable");
}

double pnl_gp_output(double propagated, double noise) {
    return 1.0 / (1.0 + std::exp(-(propagated + noise)));
}

double pnl_mult_output(double parent_sum, double noise) {
    if (parent_sum <= 0.0)
        throw NonPositiveSum("pnl-mult: parent sum must be positive");
    return std::exp(std::log(parent_sum) + noise);
}

namespace {

Dataset assemble(const Dag& dag, Eigen::MatrixXd values) {
    std::vector<Variable> vars;
    for (int i = 0; i < dag.node_count(); ++i)
        vars.push_back({"x" + std::to_string(i), i, 1});
    return Dataset(std::move(values), std::move(vars));
}

}  // namespace

Dataset sample_pnl_gp(const Dag& dag, int n, std::uint64_t seed) {
    if (n < 2) throw Error("sample_pnl_gp: need n >= 2");
    const int d = dag.node_count();
    Eigen::MatrixXd values(n, d);
    for (int node : dag.topological_order()) {
        Rng rng(mix_seed(mix_seed(seed, 0x504e4c47), node));
        const auto& parents = dag.parents(node);
        if (parents.empty()) {
            for (int r = 0; r < n; ++r) values(r, node) = rng.uniform(-1.0, 1.0);
            continue;
        }
        Eigen::MatrixXd parent_values(n, parents.size());
        int c = 0;
        for (int p : parents) parent_values.col(c++) = values.col(p);
        const Eigen::VectorXd mech = sample_gp_function(
            parent_values, /*bandwidth=*/1.0, rng.next_u64());
        const double b = rng.uniform();
        for (int r = 0; r < n; ++r)
            values(r, node) = pnl_gp_output(mech[r], rng.laplace(b));
    }
    return assemble(dag, std::move(values));
}

Dataset sample_pnl_mult(const Dag& dag, int n, std::uint64_t seed) {
    if (n < 2) throw Error("sample_pnl_mult: need n >= 2");
    const int d = dag.node_count();
    Eigen::MatrixXd values(n, d);
    for (int node : dag.topological_order()) {
        Rng rng(mix_seed(mix_seed(seed, 0x504e4c4d), node));
        const auto& parents = dag.parents(node);
        if (parents.empty()) {
            for (int r = 0; r < n; ++r) values(r, node) = rng.uniform(0.0, 2.0);
            continue;
        }
        const double s2 = rng.uniform();
        const double sd = std::sqrt(s2);
        for (int r = 0; r < n; ++r) {
            double sum = 0.0;
            for (int p : parents) sum += values(r, p);
            values(r, node) = pnl_mult_output(sum, std::abs(rng.normal(0.0, sd)));
        }
    }
    return assemble(dag, std::move(values));
}

Dataset sample_linear_gauss(const Dag& dag, int n, std::uint64_t seed,
                            double coeff_lo, double coeff_hi, double noise_sd) {
    if (n < 2) throw Error("sample_linear_gauss: need n >= 2");
    if (coeff_lo < 0.05 || coeff_hi < coeff_lo)
        throw Error("sample_linear_gauss: coefficient range must exclude zero");
    const int d = dag.node_count();
    Eigen::MatrixXd values(n, d);
    for (int node : dag.topological_order()) {
        Rng rng(mix_seed(mix_seed(seed, 0x4c494e47), node));
        const auto& parents = dag.parents(node);
        std::vector<double> weights;
        for (std::size_t k = 0; k < parents.size(); ++k) {
            const double magnitude = rng.uniform(coeff_lo, coeff_hi);
            weights.push_back(rng.uniform() < 0.5 ? -magnitude : magnitude);
        }
        for (int r = 0; r < n; ++r) {
            double value = rng.normal(0.0, noise_sd);
            int k = 0;
            for (int p : parents) value += weights[k++] * values(r, p);
            values(r, node) = value;
        }
    }
    return assemble(dag, std::move(values));
}

Dataset sample_scm(ScmModel model, const Dag& dag, int n, std::uint64_t seed) {
    switch (model) {
        case ScmModel::PnlGp: return sample_pnl_gp(dag, n, seed);
        case ScmModel::PnlMult: return sample_pnl_mult(dag, n, seed);
        case ScmModel::LinearGauss: return sample_linear_gauss(dag, n, seed);
    }
    throw Error("sample_scm: unknown model");
}

}  // namespace cges
