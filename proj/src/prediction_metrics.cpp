#include "specdec/prediction_metrics.hpp"

#include "specdec/errors.hpp"

namespace specdec {

ConfusionCounts confusion(std::span<const SlotState> predicted, std::span<const SlotState> actual) {
  if (predicted.size() != actual.size()) throw ParameterError("confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == SlotState::busy;
    const bool a = actual[i] == SlotState::busy;
    if (p && a) ++c.true_busy;
    else if (p) ++c.false_busy;
    else if (a) ++c.false_idle;
    else ++c.true_idle;
  }
  return c;
}

double speed_increase_percent(const TrainTimes& t) {
  return (t.bp_seconds - t.elm_seconds) / t.bp_seconds * 100.0;
}

double time_ratio(const TrainTimes& t) { return t.elm_seconds / t.bp_seconds; }

PredictionMetrics eval_prediction(std::span<const SlotState> predicted,
                                  std::span<const SlotState> actual, std::span<const double> raw,
                                  std::optional<TrainTimes> times) {
  if (predicted.empty()) throw ParameterError("eval_prediction: empty sequences");
  if (!raw.empty() && raw.size() != actual.size())
    throw ParameterError("eval_prediction: raw output length mismatch");

  PredictionMetrics m;
  m.counts = confusion(predicted, actual);
  const auto& c = m.counts;
  if (c.actual_busy() > 0)
    m.p_d = static_cast<double>(c.true_busy) / static_cast<double>(c.actual_busy());
  if (c.actual_idle() > 0)
    m.p_fa = 1.0 - static_cast<double>(c.true_idle) / static_cast<double>(c.actual_idle());
  m.accuracy = static_cast<double>(c.true_busy + c.true_idle) / static_cast<double>(c.total());

  if (!raw.empty()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double e = raw[i] - to_bit(actual[i]);
      sum += e * e;
    }
    m.mse = sum / static_cast<double>(raw.size());
  }
  if (times && times->bp_seconds > 0.0) {
    m.i_speed = speed_increase_percent(*times);
    m.d_time = time_ratio(*times);
  }
  return m;
}

std::optional<double> error_near_transition_fraction(std::span<const SlotState> predicted,
                                                     std::span<const SlotState> actual,
                                                     std::size_t radius) {
  if (predicted.size() != actual.size()) throw ParameterError("error_near_transition: length mismatch");
  const std::size_t n = actual.size();
  auto transition_at = [&](std::size_t j) { return j > 0 && j < n && actual[j] != actual[j - 1]; };
  std::size_t errors = 0;
  std::size_t near = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (predicted[i] == actual[i]) continue;
    ++errors;
    const std::size_t lo = i >= radius ? i - radius : 0;
    for (std::size_t j = lo; j <= i + radius; ++j) {
      if (transition_at(j)) {
        ++near;
        break;
      }
    }
  }
  if (errors == 0) return std::nullopt;
  return static_cast<double>(near) / static_cast<double>(errors);
}

}  // namespace specdec
