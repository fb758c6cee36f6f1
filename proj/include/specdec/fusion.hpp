#pragma once

// Cooperative prediction: Q-learning fusion of per-user predictions plus the
// M-out-of-N and soft-combining rules it is compared against.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "specdec/channel_model.hpp"
#include "specdec/rng.hpp"

namespace specdec {

inline constexpr std::size_t kMaxFusionUsers = 20;

/// sum_i bit_i * 2^(i-1), i.e. the first entry is the least significant bit.
std::uint32_t encode_bits(std::span<const SlotState> bits);
std::vector<SlotState> decode_bits(std::uint32_t value, std::size_t width);

/// Fusion state of N local predictions (1 <= N <= 20).
std::uint32_t encode_state(std::span<const SlotState> local_predictions);

struct FusionParams {
  double alpha = 0.1;
  double gamma = 0.5;
  double reward_hit = 1.0;    // R_p
  double reward_miss = -1.0;  // R_n
  double epsilon = 0.0;

  void validate() const;
};

/// 2^N x 2 table of action values (action 0 = idle, 1 = busy).
class FusionQTable {
 public:
  FusionQTable(std::size_t n_users, FusionParams params);

  std::size_t n_users() const { return n_users_; }
  std::size_t n_states() const { return values_.size(); }
  const FusionParams& params() const { return params_; }
  void set_epsilon(double epsilon);

  double q(std::uint32_t state, SlotState action) const;
  void set_q(std::uint32_t state, SlotState action, double value);

  /// argmax_a Q(state, a), ties toward idle.
  SlotState greedy(std::uint32_t state) const;

  /// One learning step: epsilon-greedy action for `state`, reward against
  /// `actual`, then Q(state, a) += alpha [r + gamma max_a' Q(next_state, a') - Q(state, a)].
  /// Returns the action chosen before the update.
  SlotState step(std::uint32_t state, std::uint32_t next_state, SlotState actual, Rng& rng);

  /// CSV rows `state,q_idle,q_busy` under a header line.
  void write_csv(std::ostream& out) const;

 private:
  void check_state(std::uint32_t state) const;

  std::size_t n_users_;
  FusionParams params_;
  std::vector<std::array<double, 2>> values_;
};

/// Busy when at least M of the N local predictions say busy.
SlotState m_out_of_n(std::span<const SlotState> local_predictions, std::size_t m);

/// Idle when sum_i (p0_i - p1_i) / (p0_i + p1_i) >= 0, else busy.
SlotState soft_fuse(std::span<const double> p_idle, std::span<const double> p_busy);

}  // namespace specdec
