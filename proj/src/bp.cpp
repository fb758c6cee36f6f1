#include "specdec/bp.hpp"

#include <cmath>

#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

namespace specdec {
namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) { return 1.0 / (1.0 + (-z).exp()); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void BpConfig::validate() const {
  if (hidden_count < 1) throw ParameterError("BpConfig: hidden_count must be at least 1");
  if (!(learning_rate > 0.0)) throw ParameterError("BpConfig: learning_rate must be positive");
  if (max_epochs < 1) throw ParameterError("BpConfig: max_epochs must be at least 1");
  if (!(goal_mse >= 0.0)) throw ParameterError("BpConfig: goal_mse must be non-negative");
}

double BpModel::predict(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim())
    throw ParameterError("BpModel: input dimension mismatch");
  const Eigen::VectorXd hidden =
      (1.0 / (1.0 + (-(hidden_weights * x + hidden_biases).array()).exp())).matrix();
  return sigmoid(hidden.dot(output_weights) + output_bias);
}

double BpModel::predict(std::span<const SlotState> window) const {
  return predict(window_features(window));
}

Eigen::VectorXd BpModel::predict_all(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.cols()) != input_dim())
    throw ParameterError("BpModel: input dimension mismatch");
  Eigen::MatrixXd pre = inputs * hidden_weights.transpose();
  pre.rowwise() += hidden_biases.transpose();
  const Eigen::MatrixXd hidden = sigmoid(pre.array()).matrix();
  Eigen::ArrayXd out = (hidden * output_weights).array() + output_bias;
  return (1.0 / (1.0 + (-out).exp())).matrix();
}

namespace {

// Buffers reused across epochs; the S x L temporaries dominate allocation cost.
struct BpWorkspace {
  Eigen::MatrixXd hidden;
  Eigen::ArrayXd out;
  Eigen::VectorXd delta_out;
  Eigen::MatrixXd delta_hidden;
};

void gradient_into(const BpModel& model, const TrainingSet& data, BpWorkspace& ws, BpGradient& g) {
  const double count = static_cast<double>(data.size());
  ws.hidden.noalias() = data.inputs * model.hidden_weights.transpose();
  ws.hidden.rowwise() += model.hidden_biases.transpose();
  ws.hidden = (1.0 / (1.0 + (-ws.hidden.array()).exp())).matrix();
  ws.out = (ws.hidden * model.output_weights).array() + model.output_bias;
  ws.out = 1.0 / (1.0 + (-ws.out).exp());
  const Eigen::ArrayXd err = ws.out - data.targets.array();

  g.loss = err.square().sum() / count;
  // dL/d(output pre-activation) for L = mean (o - y)^2
  ws.delta_out = (2.0 / count * err * ws.out * (1.0 - ws.out)).matrix();
  g.output_weights.noalias() = ws.hidden.transpose() * ws.delta_out;
  g.output_bias = ws.delta_out.sum();
  ws.delta_hidden.noalias() = ws.delta_out * model.output_weights.transpose();
  ws.delta_hidden.array() *= ws.hidden.array() * (1.0 - ws.hidden.array());
  g.hidden_weights.noalias() = ws.delta_hidden.transpose() * data.inputs;
  g.hidden_biases = ws.delta_hidden.colwise().sum().transpose();
}

}  // namespace

BpGradient bp_gradient(const BpModel& model, const TrainingSet& data) {
  if (data.empty()) throw ParameterError("bp_gradient: empty training set");
  if (data.window() != model.input_dim()) throw ParameterError("bp_gradient: input dimension mismatch");
  BpWorkspace ws;
  BpGradient g;
  gradient_into(model, data, ws, g);
  return g;
}

BpModel bp_init(std::size_t input_dim, const BpConfig& config, std::uint64_t seed) {
  config.validate();
  if (input_dim < 1) throw ParameterError("bp_init: input_dim must be at least 1");
  const auto L = static_cast<Eigen::Index>(config.hidden_count);
  const auto n = static_cast<Eigen::Index>(input_dim);
  BpModel model;
  model.config = config;
  model.seed = seed;
  model.hidden_weights.resize(L, n);
  model.hidden_biases.resize(L);
  model.output_weights.resize(L);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j < n; ++j) model.hidden_weights(i, j) = rng.uniform(-0.5, 0.5);
  for (Eigen::Index i = 0; i < L; ++i) model.hidden_biases(i) = rng.uniform(-0.5, 0.5);
  for (Eigen::Index i = 0; i < L; ++i) model.output_weights(i) = rng.uniform(-0.5, 0.5);
  model.output_bias = rng.uniform(-0.5, 0.5);
  return model;
}

BpModel bp_train(const TrainingSet& data, const BpConfig& config, std::uint64_t seed) {
  if (data.empty()) throw ParameterError("bp_train: empty training set");
  if (data.window() < 1) throw ParameterError("bp_train: window must be at least 1");
  BpModel model = bp_init(data.window(), config, seed);
  const double lr = config.learning_rate;
  BpWorkspace ws;
  BpGradient g;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    gradient_into(model, data, ws, g);
    model.train_mse = g.loss;
    model.epochs_run = epoch;
    if (g.loss <= config.goal_mse) return model;
    model.hidden_weights -= lr * g.hidden_weights;
    model.hidden_biases -= lr * g.hidden_biases;
    model.output_weights -= lr * g.output_weights;
    model.output_bias -= lr * g.output_bias;
  }
  model.epochs_run = config.max_epochs;
  model.train_mse = (model.predict_all(data.inputs) - data.targets).squaredNorm() /
                    static_cast<double>(data.size());
  return model;
}

}  // namespace specdec
