#include "cges/ncd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cges/errors.hpp"
#include "cges/rng.hpp"

namespace cges {

double residual_correlation(const Eigen::VectorXd& f_vals,
                            const Eigen::VectorXd& h_vals,
                            const Eigen::VectorXd& g_vals,
                            const Eigen::VectorXd& l_vals, double epsilon) {
    const Eigen::VectorXd u = f_vals - h_vals;
    const Eigen::VectorXd v = g_vals - l_vals;
    Eigen::VectorXd gu, gv;
    return residual_correlation_grad(u, v, epsilon, gu, gv);
}

double residual_correlation_grad(const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, double epsilon,
                                 Eigen::VectorXd& grad_u,
                                 Eigen::VectorXd& grad_v) {
    const auto n = u.size();
    if (n != v.size() || n < 2)
        throw ShapeMismatch("residual_correlation: bad residual lengths");
    const double inv_n = 1.0 / static_cast<double>(n);
    const double mu = u.mean();
    const double mv = v.mean();
    const Eigen::VectorXd uc = u.array() - mu;
    const Eigen::VectorXd vc = v.array() - mv;
    const double cov = uc.dot(vc) * inv_n;
    const double var_u = uc.squaredNorm() * inv_n + epsilon;
    const double var_v = vc.squaredNorm() * inv_n + epsilon;
    const double rho2 = (cov * cov) / (var_u * var_v);
    grad_u = (2.0 * cov * inv_n / (var_u * var_v)) * vc -
             (2.0 * cov * cov * inv_n / (var_u * var_u * var_v)) * uc;
    grad_v = (2.0 * cov * inv_n / (var_u * var_v)) * uc -
             (2.0 * cov * cov * inv_n / (var_u * var_v * var_v)) * vc;
    return rho2;
}

namespace {

/// One Adam descent step of the squared regression loss
/// sum_i (targets_i - net(inputs_i))^2 with respect to the net parameters.
void regression_step(Mlp& net, AdamState& adam, const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& targets) {
    net.refresh_spectral();
    const ForwardTrace trace = net.forward_cached(inputs, /*batch_stats=*/true);
    const Eigen::VectorXd grad_out = 2.0 * (trace.output - targets);
    const Eigen::ArrayXd grads = net.backward(trace, grad_out);
    Eigen::ArrayXd params = net.parameters();
    adam_step(adam, params, grads, Direction::Descend);
    net.set_parameters(params);
    net.update_running_stats(trace);
}

}  // namespace

double ncd_score_vars(const Dataset& data, const std::vector<int>& xs,
                      const std::vector<int>& ys, const std::vector<int>& zs,
                      const NcdConfig& config, std::uint64_t seed,
                      std::vector<double>* trajectory) {
    const int n = data.rows();
    if (n < 4) throw Error("ncd: need at least 4 rows");
    if (xs.empty() || ys.empty()) throw Error("ncd: empty variable group");
    if (config.outer_steps < 1 || config.inner_steps < 1)
        throw Error("ncd: training horizons must be >= 1");

    const Eigen::MatrixXd xm = data.columns_for(xs);
    const Eigen::MatrixXd ym = data.columns_for(ys);
    const Eigen::MatrixXd zm = data.columns_for(zs);
    const int dz = static_cast<int>(zm.cols());

    Eigen::MatrixXd xz(n, xm.cols() + dz);
    xz << xm, zm;
    Eigen::MatrixXd yz(n, ym.cols() + dz);
    yz << ym, zm;

    MlpSpec f_spec = config.test_fn_spec;
    f_spec.input_dim = static_cast<int>(xz.cols());
    MlpSpec g_spec = config.test_fn_spec;
    g_spec.input_dim = static_cast<int>(yz.cols());
    MlpSpec h_spec = config.regressor_spec;
    h_spec.input_dim = dz;
    MlpSpec l_spec = config.regressor_spec;
    l_spec.input_dim = dz;

    Rng f_rng(mix_seed(seed, 1)), g_rng(mix_seed(seed, 2));
    Rng h_rng(mix_seed(seed, 3)), l_rng(mix_seed(seed, 4));
    Mlp f(f_spec, f_rng), g(g_spec, g_rng), h(h_spec, h_rng), l(l_spec, l_rng);

    AdamState f_adam(f.parameter_count(), config.lr);
    AdamState g_adam(g.parameter_count(), config.lr);
    AdamState h_adam(h.parameter_count(), config.lr);
    AdamState l_adam(l.parameter_count(), config.lr);

    double rho2 = 0.0;
    for (int tt = 0; tt < config.outer_steps; ++tt) {
        // Test functions are fixed inside the inner loop.
        const Eigen::VectorXd f_vals = f.forward_cached(xz, true).output;
        const Eigen::VectorXd g_vals = g.forward_cached(yz, true).output;
        for (int tr = 0; tr < config.inner_steps; ++tr) {
            regression_step(h, h_adam, zm, f_vals);
            regression_step(l, l_adam, zm, g_vals);
        }

        f.refresh_spectral();
        g.refresh_spectral();
        const ForwardTrace f_trace = f.forward_cached(xz, true);
        const ForwardTrace g_trace = g.forward_cached(yz, true);
        const Eigen::VectorXd h_vals = h.forward_cached(zm, true).output;
        const Eigen::VectorXd l_vals = l.forward_cached(zm, true).output;
        Eigen::VectorXd grad_u, grad_v;
        rho2 = residual_correlation_grad(f_trace.output - h_vals,
                                         g_trace.output - l_vals,
                                         config.correlation_epsilon, grad_u,
                                         grad_v);
        if (!std::isfinite(rho2))
            throw NonFinite("ncd: non-finite objective at outer step " +
                            std::to_string(tt + 1));
        const Eigen::ArrayXd f_grads = f.backward(f_trace, grad_u);
        const Eigen::ArrayXd g_grads = g.backward(g_trace, grad_v);
        Eigen::ArrayXd f_params = f.parameters();
        Eigen::ArrayXd g_params = g.parameters();
        adam_step(f_adam, f_params, f_grads, Direction::Ascend);
        adam_step(g_adam, g_params, g_grads, Direction::Ascend);
        f.set_parameters(f_params);
        g.set_parameters(g_params);
        if (trajectory) trajectory->push_back(rho2);
    }

    const Eigen::VectorXd f_vals = f.forward_cached(xz, true).output;
    const Eigen::VectorXd g_vals = g.forward_cached(yz, true).output;
    const Eigen::VectorXd h_vals = h.forward_cached(zm, true).output;
    const Eigen::VectorXd l_vals = l.forward_cached(zm, true).output;
    const double score = residual_correlation(f_vals, h_vals, g_vals, l_vals,
                                              config.correlation_epsilon);
    if (!std::isfinite(score)) throw NonFinite("ncd: non-finite final score");
    if (trajectory) trajectory->push_back(score);
    return std::clamp(score, 0.0, 1.0);
}

namespace {

std::uint64_t ncd_query_seed(std::uint64_t seed, int x, int y,
                             const std::vector<int>& z) {
    std::uint64_t s = mix_seed(seed, 0x4e4344);
    s = mix_seed(s, static_cast<std::uint64_t>(x) + 1);
    s = mix_seed(s, static_cast<std::uint64_t>(y) + 1);
    for (int v : z) s = mix_seed(s, static_cast<std::uint64_t>(v) + 1);
    return s;
}

}  // namespace

double ncd_score(const Dataset& data, int x, int y, const std::vector<int>& z,
                 const NcdConfig& config, std::vector<double>* trajectory) {
    return ncd_score_vars(data, {x}, {y}, z, config,
                          ncd_query_seed(config.seed, x, y, z), trajectory);
}

double global_score(const Dataset& data, const Dag& dag,
                    const NcdConfig& config) {
    const int d = dag.node_count();
    if (d != data.variable_count())
        throw NodeCountMismatch("global_score: DAG vs dataset variable count");
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        const std::set<int> parents = dag.parents(i);
        std::vector<int> others;
        for (int nd : non_descendants(dag, i))
            if (!parents.count(nd)) others.push_back(nd);
        if (others.empty()) continue;  // contributes 0
        const std::vector<int> zs(parents.begin(), parents.end());
        std::uint64_t s = mix_seed(config.seed, 0x676c6f62);
        s = mix_seed(s, static_cast<std::uint64_t>(i) + 1);
        total += ncd_score_vars(data, {i}, others, zs, config, s);
    }
    return total / static_cast<double>(d);
}

NcdDiscoveryResult discover_with_restarts(const Dataset& data,
                                          const NcdConfig& config,
                                          const GesConfig& ges_config) {
    if (config.restarts < 1) throw Error("ncd: restarts must be >= 1");
    NcdDiscoveryResult result;
    double best_score = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        NcdConfig restart_config = config;
        restart_config.seed = mix_seed(config.seed, 0x726573 + r);
        const NcdMeasure measure(data, restart_config);
        auto [cpdag, trace] = run_ges(data, measure, ges_config);
        // Same scorer seed across restarts so runs compare on the graph alone.
        const double score = global_score(data, pdag_to_dag(cpdag), config);
        result.global_scores.push_back(score);
        if (score < best_score) {
            best_score = score;
            result.cpdag = std::move(cpdag);
            result.trace = std::move(trace);
            result.best_restart = r;
        }
    }
    return result;
}

}  // namespace cges
