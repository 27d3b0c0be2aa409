#include "edgelbp/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "edgelbp/errors.hpp"
#include "edgelbp/rng.hpp"

namespace edgelbp {
namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

struct Forward {
  Eigen::MatrixXd hidden;  // samples x hidden
  Eigen::MatrixXd probs;   // samples x classes
};

Forward forward(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  Forward f;
  f.hidden = sigmoid((x * w.w1.transpose()).rowwise() + w.b1.transpose());
  Eigen::MatrixXd logits = (f.hidden * w.w2.transpose()).rowwise() + w.b2.transpose();
  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  logits = (logits.colwise() - row_max).array().exp().matrix();
  const Eigen::VectorXd row_sum = logits.rowwise().sum();
  f.probs = logits.array().colwise() / row_sum.array();
  return f;
}

double cross_entropy(const Eigen::MatrixXd& probs, std::span<const int> labels) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    loss -= std::log(std::max(probs(i, labels[static_cast<std::size_t>(i)]), 1e-300));
  }
  return loss / static_cast<double>(probs.rows());
}

void check_inputs(const Eigen::Ref<const Eigen::MatrixXd>& x, std::span<const int> labels) {
  if (x.rows() == 0 || static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw Error(Errc::InvalidArgument, "feature rows and labels disagree");
  }
}

}  // namespace

double& MlpWeights::parameter(Eigen::Index k) {
  if (k < w1.size()) return w1.data()[k];
  k -= w1.size();
  if (k < b1.size()) return b1.data()[k];
  k -= b1.size();
  if (k < w2.size()) return w2.data()[k];
  k -= w2.size();
  return b2.data()[k];
}

MlpWeights MlpWeights::zeros_like(const MlpWeights& other) {
  return {Eigen::MatrixXd::Zero(other.w1.rows(), other.w1.cols()), Eigen::VectorXd::Zero(other.b1.size()),
          Eigen::MatrixXd::Zero(other.w2.rows(), other.w2.cols()), Eigen::VectorXd::Zero(other.b2.size())};
}

MlpWeights init_mlp(Eigen::Index inputs, int hidden, Eigen::Index classes, std::uint64_t seed) {
  if (hidden < 1) throw Error(Errc::InvalidArgument, "hidden_units must be >= 1");
  MlpWeights w{Eigen::MatrixXd(hidden, inputs), Eigen::VectorXd(hidden), Eigen::MatrixXd(classes, hidden),
               Eigen::VectorXd(classes)};
  Rng rng(seed);
  for (Eigen::Index k = 0; k < w.parameter_count(); ++k) w.parameter(k) = rng.uniform(-0.5, 0.5);
  return w;
}

Eigen::MatrixXd mlp_forward(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features) {
  return forward(w, features).probs;
}

double mlp_loss(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels) {
  check_inputs(features, labels);
  return cross_entropy(forward(w, features).probs, labels);
}

double mlp_loss_and_gradient(const MlpWeights& w, const Eigen::Ref<const Eigen::MatrixXd>& features,
                             std::span<const int> labels, MlpWeights& grad) {
  check_inputs(features, labels);
  const Forward f = forward(w, features);
  const double n = static_cast<double>(features.rows());

  // d(loss)/d(logits) = (probs - onehot) / n
  Eigen::MatrixXd delta_out = f.probs;
  for (Eigen::Index i = 0; i < delta_out.rows(); ++i) delta_out(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
  delta_out /= n;

  grad.w2 = delta_out.transpose() * f.hidden;
  grad.b2 = delta_out.colwise().sum().transpose();
  const Eigen::MatrixXd delta_hidden =
      ((delta_out * w.w2).array() * f.hidden.array() * (1.0 - f.hidden.array())).matrix();
  grad.w1 = delta_hidden.transpose() * features;
  grad.b1 = delta_hidden.colwise().sum().transpose();
  return cross_entropy(f.probs, labels);
}

MlpWeights train_mlp(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                     const MlpConfig& config, std::vector<double>* loss_history) {
  if (config.learning_rate <= 0.0) throw Error(Errc::InvalidArgument, "learning_rate must be > 0");
  if (config.epochs < 0) throw Error(Errc::InvalidArgument, "epochs must be >= 0");
  MlpWeights w = init_mlp(features.cols(), config.hidden_units, n_classes, config.seed);
  MlpWeights grad = MlpWeights::zeros_like(w);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = mlp_loss_and_gradient(w, features, labels, grad);
    if (loss_history) loss_history->push_back(loss);
    w.w1 -= config.learning_rate * grad.w1;
    w.b1 -= config.learning_rate * grad.b1;
    w.w2 -= config.learning_rate * grad.w2;
    w.b2 -= config.learning_rate * grad.b2;
  }
  if (loss_history) loss_history->push_back(mlp_loss(w, features, labels));
  return w;
}

double mlp_gradient_check(const MlpConfig& config, const Eigen::Ref<const Eigen::MatrixXd>& features,
                          std::span<const int> labels, int n_classes) {
  constexpr double h = 1e-5;
  MlpWeights w = init_mlp(features.cols(), config.hidden_units, n_classes, config.seed);
  MlpWeights analytic = MlpWeights::zeros_like(w);
  mlp_loss_and_gradient(w, features, labels, analytic);

  double worst = 0.0;
  for (Eigen::Index k = 0; k < w.parameter_count(); ++k) {
    double& p = w.parameter(k);
    const double saved = p;
    p = saved + h;
    const double up = mlp_loss(w, features, labels);
    p = saved - h;
    const double down = mlp_loss(w, features, labels);
    p = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic.parameter(k);
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace edgelbp
