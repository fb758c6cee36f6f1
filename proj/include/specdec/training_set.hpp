#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "specdec/channel_model.hpp"

namespace specdec {

/// Sliding-window samples for next-slot prediction: row s of `inputs` holds
/// states[s .. s+window) as 0/1 values and `targets[s]` holds states[s+window].
struct TrainingSet {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd targets;

  std::size_t window() const { return static_cast<std::size_t>(inputs.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
  bool empty() const { return inputs.rows() == 0; }
};

TrainingSet make_training_set(std::span<const SlotState> states, std::size_t window);

/// 0/1 feature vector of one window.
Eigen::VectorXd window_features(std::span<const SlotState> window);

}  // namespace specdec
