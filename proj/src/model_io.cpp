#include "specdec/model_io.hpp"

#include <string>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

using nlohmann::json;

void expect_kind(const json& doc, const char* kind) {
  if (!doc.is_object() || doc.value("kind", std::string{}) != kind)
    throw ParameterError(std::string("model document is not of kind '") + kind + "'");
}

template <typename T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw ParameterError(std::string("model document lacks field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model field '") + name + "': " + e.what());
  }
}

const json& member(const json& doc, const char* name) {
  if (!doc.contains(name)) throw ParameterError(std::string("model document lacks field '") + name + "'");
  return doc.at(name);
}

Eigen::VectorXd vector_from_json(const json& values, Eigen::Index size) {
  return matrix_from_json(values, size, 1).col(0);
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& values, Eigen::Index rows, Eigen::Index cols) {
  if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols)
    throw ParameterError("model document: array size does not match its dimensions");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!values[k].is_number()) throw ParameterError("model document: non-numeric weight");
      m(i, j) = values[k++].get<double>();
    }
  return m;
}

json to_json(const ElmModel& model) {
  return json{{"kind", "elm"},
              {"activation", "sine"},
              {"input_dim", model.input_dim()},
              {"hidden_count", model.hidden_count()},
              {"seed", model.seed},
              {"input_weights", matrix_to_json(model.input_weights)},
              {"biases", matrix_to_json(model.biases)},
              {"output_weights", matrix_to_json(model.output_weights)}};
}

ElmModel elm_from_json(const json& doc) {
  expect_kind(doc, "elm");
  const auto n = field<Eigen::Index>(doc, "input_dim");
  const auto L = field<Eigen::Index>(doc, "hidden_count");
  if (n < 1 || L < 1) throw ParameterError("elm document: dimensions must be positive");
  ElmModel m;
  m.seed = field<std::uint64_t>(doc, "seed");
  m.input_weights = matrix_from_json(member(doc, "input_weights"), L, n);
  m.biases = vector_from_json(member(doc, "biases"), L);
  m.output_weights = vector_from_json(member(doc, "output_weights"), L);
  return m;
}

json to_json(const BpModel& model) {
  return json{{"kind", "bp"},
              {"input_dim", model.input_dim()},
              {"hidden_count", model.hidden_count()},
              {"seed", model.seed},
              {"learning_rate", model.config.learning_rate},
              {"max_epochs", model.config.max_epochs},
              {"goal_mse", model.config.goal_mse},
              {"epochs_run", model.epochs_run},
              {"train_mse", model.train_mse},
              {"hidden_weights", matrix_to_json(model.hidden_weights)},
              {"hidden_biases", matrix_to_json(model.hidden_biases)},
              {"output_weights", matrix_to_json(model.output_weights)},
              {"output_bias", model.output_bias}};
}

BpModel bp_from_json(const json& doc) {
  expect_kind(doc, "bp");
  const auto n = field<Eigen::Index>(doc, "input_dim");
  const auto L = field<Eigen::Index>(doc, "hidden_count");
  if (n < 1 || L < 1) throw ParameterError("bp document: dimensions must be positive");
  BpModel m;
  m.seed = field<std::uint64_t>(doc, "seed");
  m.config.hidden_count = static_cast<std::size_t>(L);
  m.config.learning_rate = field<double>(doc, "learning_rate");
  m.config.max_epochs = field<std::size_t>(doc, "max_epochs");
  m.config.goal_mse = field<double>(doc, "goal_mse");
  m.epochs_run = field<std::size_t>(doc, "epochs_run");
  m.train_mse = field<double>(doc, "train_mse");
  m.hidden_weights = matrix_from_json(member(doc, "hidden_weights"), L, n);
  m.hidden_biases = vector_from_json(member(doc, "hidden_biases"), L);
  m.output_weights = vector_from_json(member(doc, "output_weights"), L);
  m.output_bias = field<double>(doc, "output_bias");
  return m;
}

json to_json(const HmmModel& model) {
  return json{{"kind", "hmm"},
              {"n_states", model.n_states()},
              {"n_symbols", model.n_symbols()},
              {"initial", matrix_to_json(model.initial)},
              {"transition", matrix_to_json(model.transition)},
              {"emission", matrix_to_json(model.emission)}};
}

HmmModel hmm_from_json(const json& doc) {
  expect_kind(doc, "hmm");
  const auto n = field<Eigen::Index>(doc, "n_states");
  const auto k = field<Eigen::Index>(doc, "n_symbols");
  if (n < 1 || k < 1) throw ParameterError("hmm document: dimensions must be positive");
  HmmModel m;
  m.initial = vector_from_json(member(doc, "initial"), n);
  m.transition = matrix_from_json(member(doc, "transition"), n, n);
  m.emission = matrix_from_json(member(doc, "emission"), n, k);
  m.validate();
  return m;
}

}  // namespace specdec
