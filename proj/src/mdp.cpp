#include "specdec/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "specdec/decision.hpp"
#include "specdec/errors.hpp"
#include "specdec/model_io.hpp"

namespace specdec {

TransitionModel::TransitionModel(std::size_t n_states, std::size_t n_actions, bool action_independent)
    : n_states_(n_states), n_actions_(n_actions), action_independent_(action_independent) {
  if (n_states < 1 || n_actions < 1) throw ParameterError("TransitionModel: empty state or action set");
  rows_.resize(action_independent ? n_states : n_states * n_actions);
  observed_.assign(n_states, false);
}

std::size_t TransitionModel::row_index(std::uint32_t s, std::size_t a) const {
  if (s >= n_states_ || a >= n_actions_) throw ParameterError("TransitionModel: index out of range");
  return action_independent_ ? s : static_cast<std::size_t>(s) * n_actions_ + a;
}

const TransitionRow& TransitionModel::row(std::uint32_t s, std::size_t a) const { return rows_[row_index(s, a)]; }

void TransitionModel::set_row(std::uint32_t s, std::size_t a, TransitionRow row) {
  double sum = 0.0;
  for (const auto& [next, p] : row) {
    if (next >= n_states_) throw ParameterError("TransitionModel: next state out of range");
    if (!(p >= 0.0)) throw ParameterError("TransitionModel: negative probability");
    sum += p;
  }
  if (sum > 1.0 + 1e-9) throw ParameterError("TransitionModel: row sums above 1");
  rows_[row_index(s, a)] = std::move(row);
}

double TransitionModel::probability(std::uint32_t s, std::size_t a, std::uint32_t s_next) const {
  double p = 0.0;
  for (const auto& [next, q] : row(s, a))
    if (next == s_next) p += q;
  return p;
}

double TransitionModel::row_sum(std::uint32_t s, std::size_t a) const {
  double sum = 0.0;
  for (const auto& entry : row(s, a)) sum += entry.second;
  return sum;
}

TransitionModel estimate_transitions(std::span<const ChannelTrace> traces, std::size_t n_actions) {
  if (traces.empty() || traces.size() > kMaxDecisionChannels)
    throw ParameterError("estimate_transitions: need 1..20 channel traces");
  const std::size_t length = traces.front().size();
  for (const auto& tr : traces)
    if (tr.size() != length) throw ParameterError("estimate_transitions: traces differ in length");
  if (length < 2) throw ParameterError("estimate_transitions: need at least two slots");

  std::vector<std::uint32_t> states(length);
  std::vector<SlotState> column(traces.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t c = 0; c < traces.size(); ++c) column[c] = traces[c][t];
    states[t] = encode_env_state(column);
  }

  const std::size_t n_states = std::size_t{1} << traces.size();
  std::vector<std::map<std::uint32_t, std::size_t>> counts(n_states);
  for (std::size_t t = 0; t + 1 < length; ++t) ++counts[states[t]][states[t + 1]];

  TransitionModel model(n_states, n_actions, true);
  for (std::uint32_t s = 0; s < n_states; ++s) {
    std::size_t total = 0;
    for (const auto& entry : counts[s]) total += entry.second;
    TransitionRow row;
    if (total == 0) {
      row.emplace_back(s, 1.0);
    } else {
      for (const auto& [next, n] : counts[s])
        row.emplace_back(next, static_cast<double>(n) / static_cast<double>(total));
      model.mark_observed(s, true);
    }
    model.set_row(s, 0, std::move(row));
  }
  return model;
}

RewardEstimator::RewardEstimator(std::size_t n_states, std::size_t n_actions)
    : n_actions_(n_actions), sums_(n_states * n_actions, 0.0), counts_(n_states * n_actions, 0) {}

void RewardEstimator::observe(std::uint32_t s, std::size_t a, double r) {
  const std::size_t i = static_cast<std::size_t>(s) * n_actions_ + a;
  if (a >= n_actions_ || i >= sums_.size()) throw ParameterError("RewardEstimator: index out of range");
  sums_[i] += r;
  ++counts_[i];
}

double RewardEstimator::mean(std::uint32_t s, std::size_t a) const {
  const std::size_t i = static_cast<std::size_t>(s) * n_actions_ + a;
  if (a >= n_actions_ || i >= sums_.size()) throw ParameterError("RewardEstimator: index out of range");
  return counts_[i] == 0 ? 0.0 : sums_[i] / static_cast<double>(counts_[i]);
}

std::size_t RewardEstimator::count(std::uint32_t s, std::size_t a) const {
  return counts_.at(static_cast<std::size_t>(s) * n_actions_ + a);
}

Eigen::MatrixXd RewardEstimator::means() const {
  const auto n_states = static_cast<Eigen::Index>(sums_.size() / n_actions_);
  Eigen::MatrixXd m(n_states, static_cast<Eigen::Index>(n_actions_));
  for (Eigen::Index s = 0; s < n_states; ++s)
    for (Eigen::Index a = 0; a < m.cols(); ++a)
      m(s, a) = mean(static_cast<std::uint32_t>(s), static_cast<std::size_t>(a));
  return m;
}

namespace {

void check_model(const MdpModel& model) {
  const auto& tm = model.transitions;
  if (model.reward.rows() != static_cast<Eigen::Index>(tm.n_states()) ||
      model.reward.cols() != static_cast<Eigen::Index>(tm.n_actions()))
    throw ParameterError("MdpModel: reward matrix shape does not match the transition model");
}

double expected_next(const TransitionRow& row, const Eigen::VectorXd& values) {
  double sum = 0.0;
  for (const auto& [next, p] : row) sum += p * values(next);
  return sum;
}

// One application of the optimality operator; fills `policy` when non-null.
Eigen::VectorXd bellman_backup(const MdpModel& model, const Eigen::VectorXd& values, double gamma,
                               std::vector<std::size_t>* policy) {
  const auto& tm = model.transitions;
  Eigen::VectorXd out(static_cast<Eigen::Index>(tm.n_states()));
  for (std::uint32_t s = 0; s < tm.n_states(); ++s) {
    const double shared = tm.action_independent() ? expected_next(tm.row(s, 0), values) : 0.0;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < tm.n_actions(); ++a) {
      const double future = tm.action_independent() ? shared : expected_next(tm.row(s, a), values);
      const double q = model.reward(s, static_cast<Eigen::Index>(a)) + gamma * future;
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    out(s) = best;
    if (policy) (*policy)[s] = best_a;
  }
  return out;
}

}  // namespace

double action_value(const MdpModel& model, const Eigen::VectorXd& values, double gamma, std::uint32_t s,
                    std::size_t a) {
  return model.reward(s, static_cast<Eigen::Index>(a)) + gamma * expected_next(model.transitions.row(s, a), values);
}

ValueIterationResult value_iteration(const MdpModel& model, double gamma, double tol,
                                     const std::optional<Eigen::VectorXd>& warm_start) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("value_iteration: gamma must be in [0, 1)");
  if (!(tol > 0.0)) throw ParameterError("value_iteration: tol must be positive");
  check_model(model);
  const auto n = static_cast<Eigen::Index>(model.transitions.n_states());

  ValueIterationResult result;
  result.values = warm_start && warm_start->size() == n ? *warm_start : Eigen::VectorXd::Zero(n);
  result.policy.assign(static_cast<std::size_t>(n), 0);
  while (true) {
    Eigen::VectorXd next = bellman_backup(model, result.values, gamma, nullptr);
    const double delta = (next - result.values).lpNorm<Eigen::Infinity>();
    result.values = std::move(next);
    result.deltas.push_back(delta);
    ++result.sweeps;
    if (delta < tol) break;
  }
  bellman_backup(model, result.values, gamma, &result.policy);
  return result;
}

double bellman_residual(const MdpModel& model, const Eigen::VectorXd& values, double gamma) {
  check_model(model);
  return (bellman_backup(model, values, gamma, nullptr) - values).lpNorm<Eigen::Infinity>();
}

nlohmann::json to_json(const ValueIterationResult& result) {
  return nlohmann::json{{"kind", "mdp_solution"},
                        {"sweeps", result.sweeps},
                        {"values", matrix_to_json(result.values)},
                        {"policy", result.policy}};
}

}  // namespace specdec
