#pragma once

// Experiment drivers behind each CLI scenario.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specdec/access_sim.hpp"
#include "specdec/config.hpp"
#include "specdec/prediction_metrics.hpp"

namespace specdec {

struct PredictionRow {
  std::string method;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  PredictionMetrics metrics;
  std::optional<double> near_transition;  // share of errors next to a state change
};

struct DecisionRow {
  std::string method;
  std::size_t K = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  DecisionMetrics metrics;
};

/// Test MSE of both predictors for one input-layer size.
struct CurvePoint {
  std::size_t window = 0;
  std::size_t rep = 0;
  double elm_mse = 0.0;
  double bp_mse = 0.0;
};

/// Wall-clock training times; kept out of the canonical outputs.
struct TimingRow {
  std::size_t rep = 0;
  TrainTimes times;
};

struct RunSummary {
  SimConfig config;
  std::vector<std::uint64_t> seeds;  // per repetition
  std::vector<PredictionRow> prediction;
  std::vector<DecisionRow> decision;
  std::vector<CurvePoint> mse_curve;
  std::vector<TimingRow> timings;
  std::vector<std::string> events;  // JSON lines, collected when requested
};

struct RunOptions {
  bool collect_events = false;
};

std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep);

RunSummary run_prediction_benchmark(const SimConfig& config);
RunSummary run_fusion_benchmark(const SimConfig& config);
RunSummary run_recommendation_benchmark(const SimConfig& config, const RunOptions& options = {});
/// Decision scenario one or two, picked by config.scenario.
RunSummary run_decision_scenario(const SimConfig& config, const RunOptions& options = {});
RunSummary run_scenario(const SimConfig& config, const RunOptions& options = {});

/// Local predictions that flip the truth independently with the given rate.
std::vector<SlotState> noisy_copy(std::span<const SlotState> truth, double error_rate, std::uint64_t seed);

}  // namespace specdec
