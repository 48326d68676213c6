#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alab/prob.hpp"
#include "alab/random.hpp"

namespace alab {

struct Encoder {
    Eigen::MatrixXd weight;  ///< h x d
    Eigen::VectorXd bias;    ///< h
};

struct Head {
    Eigen::MatrixXd weight;  ///< n x h
    Eigen::VectorXd bias;    ///< n
};

/// One-hidden-layer ReLU classifier: softmax(W2 relu(W1 x + b1) + b2).
struct MlpParams {
    Encoder encoder;
    Head head;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(encoder.weight.cols()); }
    std::size_t hidden_dim() const noexcept { return static_cast<std::size_t>(encoder.weight.rows()); }
    std::size_t classes() const noexcept { return static_cast<std::size_t>(head.weight.rows()); }
};

/// Gradients share the parameter layout.
using MlpGrads = MlpParams;

/// Zero parameters of the given shape.
MlpParams zero_params(std::size_t d, std::size_t h, std::size_t n);

/// Uniform in [-a, a], a = sqrt(6 / (fan_in + fan_out)); zero biases.
MlpParams init_params(std::size_t d, std::size_t h, std::size_t n, Rng& rng);

/// Two encoders sharing one head. encoder1 is the EMA copy, encoder2 is trained
/// directly together with the head.
struct TwoStream {
    Encoder encoder1;
    MlpParams student;  ///< encoder2 + head
    double omega = 0.95;

    const Encoder& encoder2() const noexcept { return student.encoder; }
    const Head& head() const noexcept { return student.head; }
    MlpParams teacher() const { return MlpParams{encoder1, student.head}; }
};

Eigen::VectorXd logits(const MlpParams& params, std::span<const double> x);
ProbVec softmax(const Eigen::VectorXd& z);
ProbVec forward(const MlpParams& params, std::span<const double> x);

struct LabeledSample {
    std::span<const double> x;
    ClassIndex label = 0;
};

struct SoftSample {
    std::span<const double> x;
    std::span<const double> target;
};

inline constexpr double kLogClamp = 1e-12;

/// -sum_j t[j] log(max(p[j], 1e-12)).
double cross_entropy(std::span<const double> target, std::span<const double> p);

struct LossResult {
    double total = 0.0;
    double supervised = 0.0;
    double unsupervised = 0.0;
    MlpGrads grads;
};

/// mean_labeled H(onehot(y), p) + eta * mean_unlabeled H(q~, p) with exact gradients.
/// An empty batch contributes zero.
LossResult loss_and_grads(const MlpParams& params, std::span<const LabeledSample> labeled,
                          std::span<const SoftSample> unlabeled, double eta);

void sgd_step(MlpParams& params, const MlpGrads& grads, double lr);

/// base * 0.1^(number of decay epochs <= epoch); epochs are 1-based.
double learning_rate(std::size_t epoch, double base, std::span<const std::size_t> decay_epochs,
                     double factor = 0.1);

/// encoder1 <- encoder1 * omega + encoder2 * (1 - omega).
TwoStream ema_couple(TwoStream ts);

/// "ALAB1", u32 d, h, n (little endian), then f64: encoder1 W1 (row-major), b1,
/// encoder2 W1, b1, head W2, b2.
void save_params(const TwoStream& ts, const std::filesystem::path& path);
TwoStream load_params(const std::filesystem::path& path, double omega = 0.95);

}  // namespace alab
