#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "specdec/channel_model.hpp"
#include "specdec/training_set.hpp"

namespace specdec {

/// Extreme learning machine: single hidden layer with random fixed input
/// weights and sine activation; only the output weights are fitted.
struct ElmModel {
  Eigen::MatrixXd input_weights;  // hidden_count x input_dim
  Eigen::VectorXd biases;         // hidden_count
  Eigen::VectorXd output_weights; // hidden_count
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return static_cast<std::size_t>(input_weights.cols()); }
  std::size_t hidden_count() const { return static_cast<std::size_t>(input_weights.rows()); }

  /// Hidden-layer outputs for every row of `inputs` (samples x hidden_count).
  Eigen::MatrixXd hidden_matrix(const Eigen::MatrixXd& inputs) const;

  /// Unthresholded output sum_i beta_i * sin(w_i . x + b_i).
  double predict(const Eigen::VectorXd& x) const;
  double predict(std::span<const SlotState> window) const;
  Eigen::VectorXd predict_all(const Eigen::MatrixXd& inputs) const;
};

/// Draws W and b uniform on [-1, 1] (W row-major first, then b) and solves the
/// output weights by pinv_solve. Throws ParameterError for L < 1 or empty data.
ElmModel elm_train(const TrainingSet& data, std::size_t hidden_count, std::uint64_t seed);

/// 1 when raw >= lambda, else 0.
SlotState threshold(double raw, double lambda = 0.5);

}  // namespace specdec
