#include "cges/neural.hpp"

#include <cmath>

#include "cges/errors.hpp"

namespace cges {

Eigen::MatrixXd spectral_normalize(const Eigen::MatrixXd& weight,
                                   Eigen::VectorXd& power_vec, int iterations,
                                   double* sigma_out) {
    constexpr double kFloor = 1e-12;
    if (sigma_out) *sigma_out = 1.0;
    if (weight.rows() == 0 || weight.cols() == 0) return weight;
    if (power_vec.size() != weight.rows())
        power_vec = Eigen::VectorXd::Constant(
            weight.rows(), 1.0 / std::sqrt(static_cast<double>(weight.rows())));
    Eigen::VectorXd u = power_vec;
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXd v = weight.transpose() * u;
        const double vn = v.norm();
        if (vn < kFloor) return weight;  // zero matrix
        v /= vn;
        u = weight * v;
        sigma = u.norm();
        if (sigma < kFloor) return weight;
        u /= sigma;
    }
    power_vec = u;
    if (sigma < kFloor) return weight;
    if (sigma_out) *sigma_out = sigma;
    return weight / sigma;
}

Mlp::Mlp(const MlpSpec& spec, Rng& rng) : spec_(spec) {
    if (spec.input_dim < 0 || spec.hidden_layers < 0 || spec.output_dim < 1 ||
        (spec.hidden_layers > 0 && spec.hidden_width < 1))
        throw Error("Mlp: invalid spec");
    auto make_dense = [&](int out, int in) {
        DenseLayer layer;
        layer.weight.resize(out, in);
        const double bound = in > 0 ? std::sqrt(6.0 / in) : 0.0;
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c)
                layer.weight(r, c) = rng.uniform(-bound, bound);
        layer.bias = Eigen::VectorXd::Zero(out);
        layer.power_u.resize(out);
        for (int r = 0; r < out; ++r) layer.power_u[r] = rng.normal();
        const double norm = layer.power_u.norm();
        if (norm > 0) layer.power_u /= norm;
        return layer;
    };
    int in = spec.input_dim;
    for (int l = 0; l < spec.hidden_layers; ++l) {
        dense_.push_back(make_dense(spec.hidden_width, in));
        if (spec.use_batch_norm) {
            BatchNormLayer bn;
            bn.gamma = Eigen::VectorXd::Ones(spec.hidden_width);
            bn.beta = Eigen::VectorXd::Zero(spec.hidden_width);
            bn.running_mean = Eigen::VectorXd::Zero(spec.hidden_width);
            bn.running_var = Eigen::VectorXd::Ones(spec.hidden_width);
            bn_.push_back(std::move(bn));
        }
        in = spec.hidden_width;
    }
    dense_.push_back(make_dense(spec.output_dim, in));
    refresh_spectral();
}

void Mlp::refresh_spectral(int iterations) {
    if (!spec_.use_spectral_norm) return;
    if (iterations < 0) iterations = spec_.power_iterations;
    for (auto& layer : dense_) {
        double sigma = 1.0;
        spectral_normalize(layer.weight, layer.power_u, iterations, &sigma);
        layer.scale = 1.0 / sigma;
    }
}

Eigen::MatrixXd Mlp::effective_weight(int layer) const {
    if (!spec_.use_spectral_norm) return dense_[layer].weight;
    return dense_[layer].weight * dense_[layer].scale;
}

ForwardTrace Mlp::forward_cached(const Eigen::MatrixXd& batch,
                                 bool batch_stats) const {
    if (batch.cols() != spec_.input_dim)
        throw ShapeMismatch("Mlp: batch width " + std::to_string(batch.cols()) +
                            " != input_dim " + std::to_string(spec_.input_dim));
    const auto n = batch.rows();
    ForwardTrace trace;
    trace.batch_stats = batch_stats;
    trace.input = batch;
    Eigen::MatrixXd current = batch;
    for (int l = 0; l < spec_.hidden_layers; ++l) {
        Eigen::MatrixXd pre = current * effective_weight(l).transpose();
        pre.rowwise() += dense_[l].bias.transpose();
        if (spec_.use_batch_norm) {
            const BatchNormLayer& bn = bn_[l];
            Eigen::VectorXd mean, var;
            if (batch_stats) {
                mean = pre.colwise().mean();
                var = (pre.rowwise() - mean.transpose())
                          .array()
                          .square()
                          .colwise()
                          .mean();
            } else {
                mean = bn.running_mean;
                var = bn.running_var;
            }
            const Eigen::VectorXd inv_std =
                (var.array() + kBnEpsilon).rsqrt().matrix();
            Eigen::MatrixXd xhat =
                (pre.rowwise() - mean.transpose()).array().rowwise() *
                inv_std.transpose().array();
            pre = (xhat.array().rowwise() * bn.gamma.transpose().array())
                      .matrix();
            pre.rowwise() += bn.beta.transpose();
            trace.normalized.push_back(std::move(xhat));
            trace.inv_std.push_back(inv_std);
            trace.batch_mean.push_back(std::move(mean));
            trace.batch_var.push_back(std::move(var));
        }
        trace.activations.push_back(pre.cwiseMax(0.0));
        current = trace.activations.back();
    }
    const int last = spec_.hidden_layers;
    Eigen::MatrixXd out = current * effective_weight(last).transpose();
    out.rowwise() += dense_[last].bias.transpose();
    if (spec_.output_dim != 1)
        throw ShapeMismatch("Mlp: only scalar outputs are supported");
    trace.output = out.col(0);
    (void)n;
    return trace;
}

void Mlp::update_running_stats(const ForwardTrace& trace) {
    if (!spec_.use_batch_norm || !trace.batch_stats) return;
    for (std::size_t l = 0; l < bn_.size(); ++l) {
        bn_[l].running_mean = kBnMomentum * bn_[l].running_mean +
                              (1.0 - kBnMomentum) * trace.batch_mean[l];
        bn_[l].running_var = kBnMomentum * bn_[l].running_var +
                             (1.0 - kBnMomentum) * trace.batch_var[l];
    }
}

Eigen::VectorXd Mlp::forward(const Eigen::MatrixXd& batch, bool training) {
    ForwardTrace trace = forward_cached(batch, training);
    if (training) update_running_stats(trace);
    return std::move(trace.output);
}

Eigen::Index Mlp::parameter_count() const {
    Eigen::Index count = 0;
    for (const auto& layer : dense_) count += layer.weight.size() + layer.bias.size();
    for (const auto& bn : bn_) count += bn.gamma.size() + bn.beta.size();
    return count;
}

Eigen::ArrayXd Mlp::parameters() const {
    Eigen::ArrayXd flat(parameter_count());
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < dense_.size(); ++l) {
        const auto& layer = dense_[l];
        for (int r = 0; r < layer.weight.rows(); ++r)
            for (int c = 0; c < layer.weight.cols(); ++c)
                flat[at++] = layer.weight(r, c);
        for (int r = 0; r < layer.bias.size(); ++r) flat[at++] = layer.bias[r];
        if (spec_.use_batch_norm && l < bn_.size()) {
            for (int r = 0; r < bn_[l].gamma.size(); ++r) flat[at++] = bn_[l].gamma[r];
            for (int r = 0; r < bn_[l].beta.size(); ++r) flat[at++] = bn_[l].beta[r];
        }
    }
    return flat;
}

void Mlp::set_parameters(const Eigen::ArrayXd& flat) {
    if (flat.size() != parameter_count())
        throw ShapeMismatch("Mlp: parameter vector size mismatch");
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < dense_.size(); ++l) {
        auto& layer = dense_[l];
        for (int r = 0; r < layer.weight.rows(); ++r)
            for (int c = 0; c < layer.weight.cols(); ++c)
                layer.weight(r, c) = flat[at++];
        for (int r = 0; r < layer.bias.size(); ++r) layer.bias[r] = flat[at++];
        if (spec_.use_batch_norm && l < bn_.size()) {
            for (int r = 0; r < bn_[l].gamma.size(); ++r) bn_[l].gamma[r] = flat[at++];
            for (int r = 0; r < bn_[l].beta.size(); ++r) bn_[l].beta[r] = flat[at++];
        }
    }
}

Eigen::ArrayXd Mlp::backward(const ForwardTrace& trace,
                             const Eigen::VectorXd& grad_output) const {
    const auto n = trace.input.rows();
    if (grad_output.size() != n)
        throw ShapeMismatch("Mlp: grad_output length mismatch");

    std::vector<Eigen::MatrixXd> grad_weight(dense_.size());
    std::vector<Eigen::VectorXd> grad_bias(dense_.size());
    std::vector<Eigen::VectorXd> grad_gamma(bn_.size());
    std::vector<Eigen::VectorXd> grad_beta(bn_.size());

    const int last = spec_.hidden_layers;
    const Eigen::MatrixXd& last_input =
        last == 0 ? trace.input : trace.activations[last - 1];
    // Final dense layer: d(effective W) scaled back to raw W.
    const double out_scale = spec_.use_spectral_norm ? dense_[last].scale : 1.0;
    grad_weight[last] = out_scale * (grad_output.transpose() * last_input);
    grad_bias[last] = Eigen::VectorXd::Constant(1, grad_output.sum());
    Eigen::MatrixXd delta = grad_output * effective_weight(last);

    for (int l = spec_.hidden_layers - 1; l >= 0; --l) {
        // ReLU mask from the stored post-activation values.
        delta = (trace.activations[l].array() > 0.0)
                    .select(delta.array(), 0.0)
                    .matrix();
        if (spec_.use_batch_norm) {
            const BatchNormLayer& bn = bn_[l];
            const Eigen::MatrixXd& xhat = trace.normalized[l];
            grad_gamma[l] = (delta.array() * xhat.array()).colwise().sum();
            grad_beta[l] = delta.colwise().sum();
            Eigen::MatrixXd gx =
                delta.array().rowwise() * bn.gamma.transpose().array();
            if (trace.batch_stats) {
                // Batch statistics couple every row; standard fused backward.
                const Eigen::RowVectorXd sum_gx = gx.colwise().sum();
                const Eigen::RowVectorXd sum_gx_xhat =
                    (gx.array() * xhat.array()).colwise().sum();
                Eigen::MatrixXd centered =
                    (gx.array() * static_cast<double>(n)).matrix();
                centered.rowwise() -= sum_gx;
                centered -= (xhat.array().rowwise() * sum_gx_xhat.array()).matrix();
                delta = (centered.array().rowwise() *
                         (trace.inv_std[l].transpose().array() /
                          static_cast<double>(n)))
                            .matrix();
            } else {
                delta = (gx.array().rowwise() *
                         trace.inv_std[l].transpose().array())
                            .matrix();
            }
        }
        const Eigen::MatrixXd& layer_input =
            l == 0 ? trace.input : trace.activations[l - 1];
        const double scale = spec_.use_spectral_norm ? dense_[l].scale : 1.0;
        grad_weight[l] = scale * (delta.transpose() * layer_input);
        grad_bias[l] = delta.colwise().sum();
        if (l > 0) delta = delta * effective_weight(l);
    }

    Eigen::ArrayXd flat(parameter_count());
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < dense_.size(); ++l) {
        for (int r = 0; r < grad_weight[l].rows(); ++r)
            for (int c = 0; c < grad_weight[l].cols(); ++c)
                flat[at++] = grad_weight[l](r, c);
        for (int r = 0; r < grad_bias[l].size(); ++r) flat[at++] = grad_bias[l][r];
        if (spec_.use_batch_norm && l < bn_.size()) {
            for (int r = 0; r < grad_gamma[l].size(); ++r) flat[at++] = grad_gamma[l][r];
            for (int r = 0; r < grad_beta[l].size(); ++r) flat[at++] = grad_beta[l][r];
        }
    }
    return flat;
}

void adam_step(AdamState& state, Eigen::ArrayXd& params,
               const Eigen::ArrayXd& grads, Direction direction) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ShapeMismatch("adam_step: size mismatch");
    state.step += 1;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.square();
    const double mhat_scale =
        1.0 / (1.0 - std::pow(state.beta1, static_cast<double>(state.step)));
    const double vhat_scale =
        1.0 / (1.0 - std::pow(state.beta2, static_cast<double>(state.step)));
    const Eigen::ArrayXd update =
        state.lr * (state.m * mhat_scale) /
        ((state.v * vhat_scale).sqrt() + state.epsilon);
    if (direction == Direction::Descend)
        params -= update;
    else
        params += update;
}

}  // namespace cges
