#include "specdec/decision.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specdec/errors.hpp"
#include "specdec/fusion.hpp"
#include "specdec/model_io.hpp"

namespace specdec {

std::uint32_t encode_env_state(std::span<const SlotState> channel_states) {
  if (channel_states.empty() || channel_states.size() > kMaxDecisionChannels)
    throw ParameterError("encode_env_state: need 1..20 channels");
  return encode_bits(channel_states);
}

double reward(const RewardInputs& in) {
  const bool predicted_idle = in.prediction == SlotState::idle;
  double r = 0.0;
  if (predicted_idle) r = in.recommended ? 300.0 : 200.0;
  else r = in.recommended ? 200.0 : 100.0;
  return in.collision ? -r : r;
}

void AgentParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("AgentParams: alpha must be in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("AgentParams: gamma must be in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("AgentParams: epsilon must be in [0, 1]");
}

DecisionQTable::DecisionQTable(std::size_t n_channels, double alpha, double gamma)
    : n_actions_(n_channels), alpha_(alpha), gamma_(gamma) {
  if (n_channels < 1 || n_channels > kMaxDecisionChannels)
    throw ParameterError("DecisionQTable: need 1..20 channels");
  AgentParams{alpha, gamma, 0.0}.validate();
  n_states_ = std::size_t{1} << n_channels;
  values_.assign(n_states_ * n_actions_, 0.0);
}

std::size_t DecisionQTable::index(std::uint32_t state, std::size_t action) const {
  if (state >= n_states_ || action >= n_actions_)
    throw ParameterError("DecisionQTable: state or action out of range");
  return static_cast<std::size_t>(state) * n_actions_ + action;
}

double DecisionQTable::q(std::uint32_t state, std::size_t action) const { return values_[index(state, action)]; }

void DecisionQTable::set_q(std::uint32_t state, std::size_t action, double value) {
  if (!std::isfinite(value)) throw ParameterError("q value must be finite");
  values_[index(state, action)] = value;
}

double DecisionQTable::max_q(std::uint32_t state) const {
  const std::size_t base = index(state, 0);
  return *std::max_element(values_.begin() + static_cast<std::ptrdiff_t>(base),
                           values_.begin() + static_cast<std::ptrdiff_t>(base + n_actions_));
}

void DecisionQTable::update(std::uint32_t s, std::size_t a, double r, std::uint32_t s_next) {
  const double target = r + gamma_ * max_q(s_next);
  double& q = values_[index(s, a)];
  q += alpha_ * (target - q);
}

nlohmann::json DecisionQTable::to_json() const {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      values_.data(), static_cast<Eigen::Index>(n_states_), static_cast<Eigen::Index>(n_actions_));
  return nlohmann::json{{"kind", "decision_q_table"},
                        {"n_channels", n_actions_},
                        {"alpha", alpha_},
                        {"gamma", gamma_},
                        {"values", matrix_to_json(m)}};
}

DecisionQTable DecisionQTable::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("kind", std::string{}) != "decision_q_table")
    throw ParameterError("document is not a decision Q-table");
  try {
    DecisionQTable table(doc.at("n_channels").get<std::size_t>(), doc.at("alpha").get<double>(),
                         doc.at("gamma").get<double>());
    const Eigen::MatrixXd m = matrix_from_json(doc.at("values"), static_cast<Eigen::Index>(table.n_states_),
                                               static_cast<Eigen::Index>(table.n_actions_));
    for (std::size_t s = 0; s < table.n_states_; ++s)
      for (std::size_t a = 0; a < table.n_actions_; ++a)
        table.values_[s * table.n_actions_ + a] = m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("decision Q-table document: ") + e.what());
  }
}

std::size_t argmax_candidate(std::span<const std::size_t> candidates, std::span<const double> values) {
  if (candidates.empty() || values.size() != candidates.size())
    throw ParameterError("argmax_candidate: need one value per candidate");
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    if (values[k] > values[best] || (values[k] == values[best] && candidates[k] < candidates[best]))
      best = k;
  }
  return best;
}

std::optional<std::size_t> select_action(const DecisionQTable& table, std::uint32_t state,
                                         std::span<const std::size_t> candidates, double epsilon,
                                         Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  if (epsilon > 0.0 && rng.bernoulli(epsilon)) return candidates[rng.index(candidates.size())];
  std::vector<double> values(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) values[k] = table.q(state, candidates[k]);
  return candidates[argmax_candidate(candidates, values)];
}

void q_update(DecisionQTable& table, std::uint32_t s, std::size_t a, double r, std::uint32_t s_next) {
  table.update(s, a, r, s_next);
}

std::optional<std::size_t> random_access(std::span<const std::size_t> candidates, Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.index(candidates.size())];
}

std::vector<std::size_t> arbitrate(std::span<const std::size_t> requests, Rng& rng) {
  std::vector<std::size_t> order(requests.begin(), requests.end());
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  return order;
}

std::size_t ChannelLedger::granted_count() const {
  return static_cast<std::size_t>(
      std::count_if(holder_.begin(), holder_.end(), [](const auto& h) { return h.has_value(); }));
}

void ChannelLedger::grant(std::size_t channel, std::size_t su) {
  if (!is_free(channel))
    throw ParameterError("ChannelLedger: channel " + std::to_string(channel) + " is already granted");
  holder_[channel] = su;
}

void ChannelLedger::release(std::size_t channel) { holder_.at(channel).reset(); }

std::vector<std::size_t> ChannelLedger::candidates(std::span<const SlotState> sensed) const {
  if (sensed.size() != holder_.size()) throw ParameterError("ChannelLedger: sensed vector size mismatch");
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < holder_.size(); ++c)
    if (sensed[c] == SlotState::idle && !holder_[c]) out.push_back(c);
  return out;
}

}  // namespace specdec
