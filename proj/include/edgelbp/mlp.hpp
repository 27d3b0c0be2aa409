#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace edgelbp {

struct MlpConfig {
  int hidden_units = 64;
  int epochs = 200;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

/// One sigmoid hidden layer and a softmax output.
///   hidden = sigmoid(w1 * x + b1), probs = softmax(w2 * hidden + b2)
struct MlpWeights {
  Eigen::MatrixXd w1;  ///< hidden x inputs
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  ///< classes x hidden
  Eigen::VectorXd b2;

  Eigen::Index parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

  /// Parameter k in the order w1 (column-major), b1, w2, b2.
  double& parameter(Eigen::Index k);

  static MlpWeights zeros_like(const MlpWeights& other);
};

/// Every weight and bias uniform in [-0.5, 0.5], drawn from Rng(seed) in
/// parameter order.
MlpWeights init_mlp(Eigen::Index inputs, int hidden, Eigen::Index classes, std::uint64_t seed);

/// Class probabilities, one row per sample.
Eigen::MatrixXd mlp_forward(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features);

/// Mean cross-entropy over the samples.
double mlp_loss(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels);

/// Loss plus its exact gradient by backpropagation, written into `grad`.
double mlp_loss_and_gradient(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features,
                             std::span<const int> labels, MlpWeights& grad);

/// Full-batch gradient descent for `config.epochs` steps. When
/// `loss_history` is given it receives the loss before every step and
/// after the last one (epochs + 1 values).
MlpWeights train_mlp(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                     const MlpConfig& config, std::vector<double>* loss_history = nullptr);

/// Largest relative error between the backprop gradient and central finite
/// differences (h = 1e-5) over every parameter of the network initialized
/// from `config.seed`. Relative error is |a - n| / max(|a|, |n|, 1e-8).
double mlp_gradient_check(const MlpConfig& config, const Eigen::Ref<const Eigen::MatrixXd>& features,
                          std::span<const int> labels, int n_classes);

}  // namespace edgelbp
