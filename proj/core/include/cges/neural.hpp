#pragma once

#include <Eigen/Core>
#include <vector>

#include "cges/rng.hpp"

namespace cges {

/// Shape of a small MLP: `hidden_layers` blocks of
/// dense -> [batch norm] -> ReLU, then a final dense layer.
struct MlpSpec {
    int input_dim = 1;
    int hidden_layers = 2;
    int hidden_width = 20;
    bool use_batch_norm = false;
    bool use_spectral_norm = true;
    int output_dim = 1;
    int power_iterations = 1;  // per spectral refresh
};

/// Estimates the largest singular value of `weight` by power iteration and
/// returns weight / sigma. The left singular vector estimate persists in
/// power_vec across calls. A (near-)zero matrix comes back unchanged.
Eigen::MatrixXd spectral_normalize(const Eigen::MatrixXd& weight,
                                   Eigen::VectorXd& power_vec, int iterations,
                                   double* sigma_out = nullptr);

struct DenseLayer {
    Eigen::MatrixXd weight;   // out x in
    Eigen::VectorXd bias;     // out
    Eigen::VectorXd power_u;  // persisted power-iteration vector
    double scale = 1.0;       // 1 / sigma_hat from the last spectral refresh
};

struct BatchNormLayer {
    Eigen::VectorXd gamma, beta;
    Eigen::VectorXd running_mean, running_var;
};

/// Cached activations of one forward pass; consumed by Mlp::backward.
struct ForwardTrace {
    bool batch_stats = true;
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> activations;  // post-ReLU, per hidden layer
    std::vector<Eigen::MatrixXd> normalized;   // x-hat, per BN layer
    std::vector<Eigen::VectorXd> inv_std;      // per BN layer (stats in use)
    std::vector<Eigen::VectorXd> batch_mean;   // per BN layer
    std::vector<Eigen::VectorXd> batch_var;    // per BN layer (biased)
    Eigen::VectorXd output;
};

/// Multilayer perceptron with explicit reverse-mode gradients. Training flows
/// are full batch; the spectral scales are refreshed once per optimization
/// step (refresh_spectral) and treated as constants by backward.
class Mlp {
public:
    Mlp(const MlpSpec& spec, Rng& rng);

    const MlpSpec& spec() const { return spec_; }

    /// Recomputes 1/sigma for every weight matrix (updating the persisted
    /// power vectors). No-op when spectral normalization is disabled.
    void refresh_spectral(int iterations = -1);

    /// Spec-level forward: training=true uses batch statistics and folds them
    /// into the running averages, training=false uses running statistics.
    Eigen::VectorXd forward(const Eigen::MatrixXd& batch, bool training);

    /// Pure forward with cached intermediates.
    ForwardTrace forward_cached(const Eigen::MatrixXd& batch,
                                bool batch_stats) const;

    /// Folds the trace's batch statistics into the running averages.
    void update_running_stats(const ForwardTrace& trace);

    /// Flat gradient of a scalar loss with the given dL/d(output) vector.
    Eigen::ArrayXd backward(const ForwardTrace& trace,
                            const Eigen::VectorXd& grad_output) const;

    /// Trainable parameters (weights, biases, batch-norm scale/shift)
    /// flattened in a fixed order. Running statistics and power vectors are
    /// not trainable and are excluded.
    Eigen::Index parameter_count() const;
    Eigen::ArrayXd parameters() const;
    void set_parameters(const Eigen::ArrayXd& flat);

    int dense_layer_count() const { return static_cast<int>(dense_.size()); }
    const DenseLayer& dense_layer(int i) const { return dense_.at(i); }
    DenseLayer& dense_layer(int i) { return dense_.at(i); }

    static constexpr double kBnEpsilon = 1e-5;
    static constexpr double kBnMomentum = 0.9;

private:
    Eigen::MatrixXd effective_weight(int layer) const;

    MlpSpec spec_;
    std::vector<DenseLayer> dense_;     // hidden layers + final
    std::vector<BatchNormLayer> bn_;    // one per hidden layer when enabled
};

struct AdamState {
    explicit AdamState(Eigen::Index size, double lr = 0.01)
        : lr(lr),
          m(Eigen::ArrayXd::Zero(size)),
          v(Eigen::ArrayXd::Zero(size)) {}

    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    Eigen::ArrayXd m, v;
};

enum class Direction { Descend, Ascend };

/// Standard Adam update with bias correction; Ascend flips the sign of the
/// update (gradient ascent).
void adam_step(AdamState& state, Eigen::ArrayXd& params,
               const Eigen::ArrayXd& grads, Direction direction);

}  // namespace cges
