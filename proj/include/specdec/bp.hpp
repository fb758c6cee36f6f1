#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "specdec/channel_model.hpp"
#include "specdec/training_set.hpp"

namespace specdec {

struct BpConfig {
  std::size_t hidden_count = 50;
  double learning_rate = 0.2;
  std::size_t max_epochs = 200;
  double goal_mse = 1e-4;

  void validate() const;
};

/// Back-propagation network: sigmoid hidden layer, sigmoid output unit.
struct BpModel {
  Eigen::MatrixXd hidden_weights;  // hidden_count x input_dim
  Eigen::VectorXd hidden_biases;
  Eigen::VectorXd output_weights;  // hidden_count
  double output_bias = 0.0;
  BpConfig config;
  std::uint64_t seed = 0;
  std::size_t epochs_run = 0;
  double train_mse = 0.0;

  std::size_t input_dim() const { return static_cast<std::size_t>(hidden_weights.cols()); }
  std::size_t hidden_count() const { return static_cast<std::size_t>(hidden_weights.rows()); }

  double predict(const Eigen::VectorXd& x) const;
  double predict(std::span<const SlotState> window) const;
  Eigen::VectorXd predict_all(const Eigen::MatrixXd& inputs) const;
};

/// Loss (mean squared error over the set) and its gradient with respect to
/// every parameter, laid out like BpModel.
struct BpGradient {
  double loss = 0.0;
  Eigen::MatrixXd hidden_weights;
  Eigen::VectorXd hidden_biases;
  Eigen::VectorXd output_weights;
  double output_bias = 0.0;
};

BpGradient bp_gradient(const BpModel& model, const TrainingSet& data);

/// Untrained network with weights uniform on [-0.5, 0.5].
BpModel bp_init(std::size_t input_dim, const BpConfig& config, std::uint64_t seed);

/// Full-batch gradient descent from bp_init until max_epochs or train MSE <= goal.
BpModel bp_train(const TrainingSet& data, const BpConfig& config, std::uint64_t seed);

}  // namespace specdec
