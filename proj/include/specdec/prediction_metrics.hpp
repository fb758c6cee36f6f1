#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "specdec/channel_model.hpp"

namespace specdec {

struct ConfusionCounts {
  std::size_t true_busy = 0;   // predicted busy, actually busy
  std::size_t false_busy = 0;  // predicted busy, actually idle
  std::size_t true_idle = 0;
  std::size_t false_idle = 0;  // predicted idle, actually busy

  std::size_t total() const { return true_busy + false_busy + true_idle + false_idle; }
  std::size_t actual_busy() const { return true_busy + false_idle; }
  std::size_t actual_idle() const { return true_idle + false_busy; }
};

struct TrainTimes {
  double elm_seconds = 0.0;
  double bp_seconds = 0.0;
};

/// Detection metrics of one predictor. Ratios whose denominator is zero are
/// left empty rather than reported as 0.
struct PredictionMetrics {
  ConfusionCounts counts;
  std::optional<double> p_d;
  std::optional<double> p_fa;
  double accuracy = 0.0;
  std::optional<double> mse;
  std::optional<double> i_speed;  // percent
  std::optional<double> d_time;
};

ConfusionCounts confusion(std::span<const SlotState> predicted, std::span<const SlotState> actual);

/// P_D, P_FA, accuracy; MSE of `raw` against the 0/1 truth when given;
/// I_speed and D_time from `times` when given (and t_BP > 0).
PredictionMetrics eval_prediction(std::span<const SlotState> predicted,
                                  std::span<const SlotState> actual,
                                  std::span<const double> raw = {},
                                  std::optional<TrainTimes> times = std::nullopt);

/// (t_BP - t_ELM) / t_BP * 100.
double speed_increase_percent(const TrainTimes& t);
/// t_ELM / t_BP.
double time_ratio(const TrainTimes& t);

/// Fraction of prediction errors at slot i for which actual[j] != actual[j-1]
/// for some j with |i - j| <= radius. Empty when there are no errors.
std::optional<double> error_near_transition_fraction(std::span<const SlotState> predicted,
                                                     std::span<const SlotState> actual,
                                                     std::size_t radius = 1);

}  // namespace specdec
