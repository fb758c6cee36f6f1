#pragma once

// Spectrum decision: environment-state encoding, the composite access reward,
// the tabular Q-learning agent, central-node arbitration and random access.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "specdec/channel_model.hpp"
#include "specdec/rng.hpp"

namespace specdec {

inline constexpr std::size_t kMaxDecisionChannels = 20;

/// sum_i d_i * 2^(i-1) over the M sensed channel states (1 <= M <= 20).
std::uint32_t encode_env_state(std::span<const SlotState> channel_states);

struct RewardInputs {
  bool collision = false;
  SlotState prediction = SlotState::idle;  // A
  bool recommended = false;                 // B
};

/// No collision: 300 (A=0,B=1), 200 (A=0,B=0), 200 (A=1,B=1), 100 (A=1,B=0);
/// a collision negates the value.
double reward(const RewardInputs& in);

struct AgentParams {
  double alpha = 0.5;
  double gamma = 0.5;
  double epsilon = 0.1;

  void validate() const;
};

/// 2^M x M table of channel-access values.
class DecisionQTable {
 public:
  DecisionQTable(std::size_t n_channels, double alpha, double gamma);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  double q(std::uint32_t state, std::size_t action) const;
  void set_q(std::uint32_t state, std::size_t action, double value);
  double max_q(std::uint32_t state) const;

  /// Q(s,a) += alpha [r + gamma max_a' Q(s_next, a') - Q(s,a)].
  void update(std::uint32_t s, std::size_t a, double r, std::uint32_t s_next);

  nlohmann::json to_json() const;
  static DecisionQTable from_json(const nlohmann::json& doc);

 private:
  std::size_t index(std::uint32_t state, std::size_t action) const;

  std::size_t n_states_;
  std::size_t n_actions_;
  double alpha_;
  double gamma_;
  std::vector<double> values_;
};

/// Index in `candidates` of the largest value, ties toward the lowest channel.
std::size_t argmax_candidate(std::span<const std::size_t> candidates,
                             std::span<const double> values);

/// Epsilon-greedy channel choice restricted to `candidates`; empty when no
/// channel is available (the request is abandoned).
std::optional<std::size_t> select_action(const DecisionQTable& table, std::uint32_t state,
                                         std::span<const std::size_t> candidates, double epsilon,
                                         Rng& rng);

void q_update(DecisionQTable& table, std::uint32_t s, std::size_t a, double r, std::uint32_t s_next);

/// Uniform choice; empty when nothing is available.
std::optional<std::size_t> random_access(std::span<const std::size_t> candidates, Rng& rng);

/// Uniformly random priority order (Fisher-Yates) of this slot's requesters.
std::vector<std::size_t> arbitrate(std::span<const std::size_t> requests, Rng& rng);

/// Which secondary user holds each channel. A channel is granted to at most
/// one user at a time.
class ChannelLedger {
 public:
  explicit ChannelLedger(std::size_t n_channels) : holder_(n_channels) {}

  std::size_t n_channels() const { return holder_.size(); }
  bool is_free(std::size_t channel) const { return !holder_.at(channel).has_value(); }
  std::optional<std::size_t> holder(std::size_t channel) const { return holder_.at(channel); }
  std::size_t granted_count() const;

  /// Throws ParameterError if the channel is already held.
  void grant(std::size_t channel, std::size_t su);
  void release(std::size_t channel);

  /// Channels sensed idle and not held by any user, ascending.
  std::vector<std::size_t> candidates(std::span<const SlotState> sensed) const;

 private:
  std::vector<std::optional<std::size_t>> holder_;
};

}  // namespace specdec
