#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "specdec/channel_model.hpp"

namespace specdec {

/// Discrete HMM lambda = {pi, A, B}. Rows index the hidden state; B columns
/// index the observation symbol.
struct HmmModel {
  Eigen::VectorXd initial;     // pi
  Eigen::MatrixXd transition;  // A, n_states x n_states
  Eigen::MatrixXd emission;    // B, n_states x n_symbols

  std::size_t n_states() const { return static_cast<std::size_t>(transition.rows()); }
  std::size_t n_symbols() const { return static_cast<std::size_t>(emission.cols()); }

  /// Throws ParameterError unless pi and every row of A and B are
  /// non-negative and sum to 1 within `tol`.
  void validate(double tol = 1e-9) const;
};

inline constexpr double kHmmSmoothing = 1e-6;

/// Counting estimate with hidden states identified with sensed states (two
/// states, two symbols): A from transition counts, pi from state frequencies,
/// B = near-identity. Every count is smoothed by `smoothing` before row
/// normalisation. Only n_states == 2 is supported.
HmmModel hmm_fit(std::span<const SlotState> trace, std::size_t n_states = 2,
                 double smoothing = kHmmSmoothing);

/// Most likely hidden state at the last observation (log-domain Viterbi).
/// Ties resolve to the lowest state index.
std::size_t hmm_viterbi_last_state(const HmmModel& model, std::span<const SlotState> observations);

/// Next-slot prediction: argmax_j A[q_T*][j], ties toward idle.
SlotState hmm_predict(const HmmModel& model, std::span<const SlotState> observations);

}  // namespace specdec
