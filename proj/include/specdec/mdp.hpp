#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "specdec/channel_model.hpp"

namespace specdec {

/// Sparse next-state distribution.
using TransitionRow = std::vector<std::pair<std::uint32_t, double>>;

/// p(s' | s, a). When `action_independent` one row per state serves every
/// action; otherwise rows are stored per (s, a).
class TransitionModel {
 public:
  TransitionModel(std::size_t n_states, std::size_t n_actions, bool action_independent);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  bool action_independent() const { return action_independent_; }

  const TransitionRow& row(std::uint32_t s, std::size_t a) const;
  /// Replaces the row; probabilities must be non-negative and sum to <= 1.
  void set_row(std::uint32_t s, std::size_t a, TransitionRow row);
  double probability(std::uint32_t s, std::size_t a, std::uint32_t s_next) const;
  double row_sum(std::uint32_t s, std::size_t a) const;
  /// True when the row was estimated from at least one observed transition.
  bool observed(std::uint32_t s) const { return observed_.at(s); }
  void mark_observed(std::uint32_t s, bool value) { observed_.at(s) = value; }

 private:
  std::size_t row_index(std::uint32_t s, std::size_t a) const;

  std::size_t n_states_;
  std::size_t n_actions_;
  bool action_independent_;
  std::vector<TransitionRow> rows_;
  std::vector<bool> observed_;
};

/// Counts environment-state transitions in parallel channel traces
/// (channel i is bit i). PU activity does not depend on the secondary users,
/// so the estimate is action-independent. States never seen get a self-loop.
TransitionModel estimate_transitions(std::span<const ChannelTrace> traces, std::size_t n_actions);

struct MdpModel {
  TransitionModel transitions;
  Eigen::MatrixXd reward;  // n_states x n_actions, R(s, a)
};

/// Running mean of observed rewards per (s, a); unobserved pairs read 0.
class RewardEstimator {
 public:
  RewardEstimator(std::size_t n_states, std::size_t n_actions);

  void observe(std::uint32_t s, std::size_t a, double r);
  double mean(std::uint32_t s, std::size_t a) const;
  std::size_t count(std::uint32_t s, std::size_t a) const;
  Eigen::MatrixXd means() const;

 private:
  std::size_t n_actions_;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
};

struct ValueIterationResult {
  Eigen::VectorXd values;
  std::vector<std::size_t> policy;
  std::size_t sweeps = 0;
  std::vector<double> deltas;  // ||V_{k+1} - V_k||_inf per sweep
};

/// R(s, a) + gamma * sum_s' p(s'|s,a) V(s').
double action_value(const MdpModel& model, const Eigen::VectorXd& values, double gamma,
                    std::uint32_t s, std::size_t a);

/// Iterates the Bellman optimality operator until the max-norm change drops
/// below `tol`; the policy is greedy with ties toward the lowest action.
/// Throws ParameterError unless 0 <= gamma < 1 and tol > 0.
ValueIterationResult value_iteration(const MdpModel& model, double gamma, double tol = 1e-6,
                                     const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// ||T V - V||_inf for the optimality operator T.
double bellman_residual(const MdpModel& model, const Eigen::VectorXd& values, double gamma);

nlohmann::json to_json(const ValueIterationResult& result);

}  // namespace specdec
