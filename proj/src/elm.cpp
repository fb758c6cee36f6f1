#include "specdec/elm.hpp"

#include <cmath>

#include "specdec/errors.hpp"
#include "specdec/linalg.hpp"
#include "specdec/rng.hpp"

namespace specdec {

Eigen::MatrixXd ElmModel::hidden_matrix(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.cols()) != input_dim())
    throw ParameterError("ElmModel: input dimension mismatch");
  Eigen::MatrixXd pre = inputs * input_weights.transpose();
  pre.rowwise() += biases.transpose();
  return pre.array().sin().matrix();
}

double ElmModel::predict(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim())
    throw ParameterError("ElmModel: input dimension mismatch");
  const Eigen::VectorXd hidden = (input_weights * x + biases).array().sin().matrix();
  return hidden.dot(output_weights);
}

double ElmModel::predict(std::span<const SlotState> window) const {
  return predict(window_features(window));
}

Eigen::VectorXd ElmModel::predict_all(const Eigen::MatrixXd& inputs) const {
  return hidden_matrix(inputs) * output_weights;
}

ElmModel elm_train(const TrainingSet& data, std::size_t hidden_count, std::uint64_t seed) {
  if (hidden_count < 1) throw ParameterError("elm_train: hidden_count must be at least 1");
  if (data.empty()) throw ParameterError("elm_train: empty training set");

  const auto L = static_cast<Eigen::Index>(hidden_count);
  const auto n = static_cast<Eigen::Index>(data.window());
  ElmModel model;
  model.seed = seed;
  model.input_weights.resize(L, n);
  model.biases.resize(L);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j < n; ++j) model.input_weights(i, j) = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < L; ++i) model.biases(i) = rng.uniform(-1.0, 1.0);

  model.output_weights = pinv_solve(model.hidden_matrix(data.inputs), data.targets);
  return model;
}

SlotState threshold(double raw, double lambda) { return from_bit(raw >= lambda); }

}  // namespace specdec
