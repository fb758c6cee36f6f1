#pragma once

// Slot-level simulation of secondary users requesting, holding and releasing
// primary-user channels under a channel-selection policy.
//
// Slot t proceeds as:
//   1. resolve holds: a hold that started at s finishes successfully at
//      t = s + K; before that, a busy PU on its channel at t is a collision.
//      Resolution scores the channel, computes the reward and updates the
//      learning agent;
//   2. sense every channel and encode the environment state;
//   3. collect requests from free users, order them by central arbitration and
//      grant each requester an idle, unheld channel chosen by the policy.
// Requests stop at n_slots; the run continues until every hold resolves.
// Accesses granted during the warm-up use random selection and are left out
// of the metrics.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specdec/channel_model.hpp"
#include "specdec/config.hpp"
#include "specdec/decision.hpp"
#include "specdec/mdp.hpp"
#include "specdec/recommender.hpp"

namespace specdec {

enum class AccessPolicy { random, recommendation, q_learning, mdp };

std::string_view to_string(AccessPolicy p);

struct AccessSimParams {
  std::size_t n_su = 30;
  std::size_t n_slots = 1000;
  std::size_t warmup_slots = 100;
  std::size_t K = 3;
  std::size_t period = 3;  // T, used by burst requests
  RequestMode request_mode = RequestMode::probability;
  double request_prob = 0.3;
  std::size_t score_window = 10;
  std::optional<double> fixed_threshold;
  bool use_locations = false;
  AgentParams agent;
  bool epsilon_decay = true;
  double vi_tol = 1e-6;

  static AccessSimParams from_config(const SimConfig& config, std::size_t K);
};

/// Inputs shared by every policy of one repetition.
struct AccessEnvironment {
  /// Full traces; simulated slot t reads trace index history + t.
  std::vector<ChannelTrace> traces;
  std::size_t history = 0;
  /// Thresholded next-slot prediction per channel and trace index (A); empty
  /// when the reward is not needed.
  std::vector<std::vector<SlotState>> predicted_next;
  /// Environment-state transitions estimated from the history segment (MDP).
  std::optional<TransitionModel> transitions;
  std::vector<SuLocation> locations;

  std::size_t n_channels() const { return traces.size(); }
  SlotState sensed(std::size_t channel, std::size_t t) const { return traces[channel][history + t]; }
};

/// Builds the environment of one repetition: channel parameters, traces long
/// enough for the longest hold, per-channel ELM predictors trained on the
/// history segment, the transition estimate and user placement.
AccessEnvironment build_environment(const SimConfig& config, std::uint64_t rep_seed, bool with_predictions,
                                    bool with_transitions);

/// Channel parameters of one repetition (explicit list or random draw).
std::vector<ChannelParams> draw_channel_params(const SimConfig& config, std::uint64_t seed);

struct DecisionMetrics {
  std::size_t n_total = 0;
  std::size_t n_collision = 0;
  std::size_t d_success = 0;
  std::size_t n_requests = 0;
  std::size_t n_abandoned = 0;
  double p_collision = 0.0;
  double d_e = 0.0;

  /// Recomputes the ratios from the counts.
  void finalize();
};

struct SlotAudit {
  std::size_t slot = 0;
  std::size_t granted = 0;
  std::size_t pu_busy = 0;
  std::size_t free = 0;
};

struct DecisionEvent {
  std::size_t slot = 0;  // slot of the grant
  std::size_t su = 0;
  std::uint32_t state = 0;
  std::size_t action = 0;
  SlotState prediction = SlotState::idle;
  bool recommended = false;
  std::vector<std::size_t> recommendation;
  double reward = 0.0;
  bool collision = false;
  std::size_t resolved_at = 0;
  std::uint32_t rating = 0;
  bool counted = false;  // granted after the warm-up

  std::string to_json_line() const;
};

class AccessSimulator {
 public:
  AccessSimulator(const AccessSimParams& params, const AccessEnvironment& env, AccessPolicy policy,
                  std::uint64_t seed);

  /// Advances one slot and refreshes the metric ratios; returns false once the
  /// run is complete.
  bool step();
  const DecisionMetrics& run();

  bool done() const;
  std::size_t slot() const { return t_; }
  const DecisionMetrics& metrics() const { return metrics_; }
  const SlotAudit& last_audit() const { return audit_; }
  const ChannelLedger& ledger() const { return ledger_; }
  const ScoreMatrix& scores() const { return scores_; }
  const std::optional<DecisionQTable>& q_table() const { return q_table_; }
  const std::optional<ValueIterationResult>& mdp_solution() const { return mdp_solution_; }

  void set_event_sink(std::function<void(const DecisionEvent&)> sink) { sink_ = std::move(sink); }

  double epsilon_at(std::size_t t) const;

 private:
  struct Hold {
    std::size_t su = 0;
    std::optional<std::size_t> partner;
    std::size_t channel = 0;
    std::size_t start = 0;
    std::uint32_t state = 0;
    SlotState prediction = SlotState::idle;
    bool recommended = false;
    std::vector<std::size_t> recommendation;
  };

  void resolve_holds();
  void finish(Hold& hold, bool collision);
  void grant_requests(const std::vector<SlotState>& sensed, std::uint32_t state);
  std::vector<std::size_t> collect_requests();
  RecommendationList recommendation_for(std::size_t su) const;
  std::size_t choose(std::uint32_t state, const std::vector<std::size_t>& candidates,
                     const RecommendationList& list);
  void resolve_mdp();
  std::uint32_t env_state_at(std::size_t t) const;

  AccessSimParams params_;
  const AccessEnvironment& env_;
  AccessPolicy policy_;
  Rng request_rng_;
  Rng arbitration_rng_;
  Rng agent_rng_;

  std::size_t t_ = 0;
  ChannelLedger ledger_;
  std::vector<bool> su_busy_;
  std::vector<std::optional<Hold>> holds_;  // by channel
  ScoreMatrix scores_;
  DecisionMetrics metrics_;
  SlotAudit audit_;

  std::optional<DecisionQTable> q_table_;
  std::optional<RewardEstimator> rewards_;
  std::optional<MdpModel> mdp_;
  std::optional<ValueIterationResult> mdp_solution_;
  bool mdp_dirty_ = false;
  std::vector<std::vector<std::size_t>> neighbor_lists_;

  std::function<void(const DecisionEvent&)> sink_;
};

}  // namespace specdec
