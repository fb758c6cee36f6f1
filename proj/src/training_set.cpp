#include "specdec/training_set.hpp"

#include "specdec/errors.hpp"

namespace specdec {

TrainingSet make_training_set(std::span<const SlotState> states, std::size_t window) {
  if (window < 1) throw ParameterError("make_training_set: window must be at least 1");
  if (states.size() <= window)
    throw ParameterError("make_training_set: trace must be longer than the window");
  const auto count = static_cast<Eigen::Index>(states.size() - window);
  const auto n = static_cast<Eigen::Index>(window);
  TrainingSet data{Eigen::MatrixXd(count, n), Eigen::VectorXd(count)};
  for (Eigen::Index s = 0; s < count; ++s) {
    for (Eigen::Index j = 0; j < n; ++j)
      data.inputs(s, j) = to_bit(states[static_cast<std::size_t>(s + j)]);
    data.targets(s) = to_bit(states[static_cast<std::size_t>(s + n)]);
  }
  return data;
}

Eigen::VectorXd window_features(std::span<const SlotState> window) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(window.size()));
  for (std::size_t j = 0; j < window.size(); ++j) x(static_cast<Eigen::Index>(j)) = to_bit(window[j]);
  return x;
}

}  // namespace specdec
