#pragma once

// Simulation configuration and its flat `key = value` text form.
//
//   # comment
//   n_slots = 1000
//   k_values = 3-10
//   channel_params = 5:12, 2.5:18, idle
//
// Every SimConfig field has a key; unknown keys and malformed values raise
// ConfigError.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdec/bp.hpp"
#include "specdec/channel_model.hpp"

namespace specdec {

enum class Scenario { prediction, fusion, recommendation, decision1, decision2 };
enum class RequestMode { probability, burst };
enum class ThresholdMode { half_max, fixed };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

struct SimConfig {
  Scenario scenario = Scenario::decision1;
  std::uint64_t seed = 1;
  std::size_t repetitions = 1;

  // primary-user channels
  std::size_t n_channels = 10;
  std::vector<ChannelParams> channel_params;  // explicit list; empty -> drawn from the ranges below
  double holding_min = 1.0;
  double holding_max = 10.0;
  double interarrival_min = 10.0;
  double interarrival_max = 20.0;
  bool last_channel_idle = true;
  std::size_t n_slots = 1000;

  // prediction
  std::size_t window = 10;
  std::size_t elm_hidden = 30;
  BpConfig bp;
  double lambda = 0.5;
  double train_fraction = 0.5;
  std::vector<std::size_t> window_sweep;
  std::size_t history_slots = 1000;

  // cooperative fusion
  std::size_t n_su = 30;
  std::vector<double> error_rates;
  double reward_hit = 1.0;
  double reward_miss = -1.0;

  // learning agents
  double alpha = 0.5;
  double gamma = 0.5;
  double epsilon = 0.1;
  bool epsilon_decay = true;
  double vi_tol = 1e-6;

  // access simulation
  std::vector<std::size_t> k_values;
  std::size_t t_period = 0;  // 0 means T = K
  RequestMode request_mode = RequestMode::probability;
  double request_prob = 0.3;
  std::size_t score_window = 10;
  ThresholdMode th_mode = ThresholdMode::half_max;
  double th_value = 0.0;
  std::size_t warmup_slots = 100;
  double arena_side = 40.0;
  double radius = 5.0;

  /// Defaults of the experiment behind each scenario.
  static SimConfig defaults(Scenario scenario);

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  std::size_t period_for(std::size_t k) const { return t_period == 0 ? k : t_period; }

  /// Every field as `key = value` pairs, in a fixed order; feeding the text
  /// form back through parse_config reproduces the config exactly.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  std::string to_text() const;
};

/// Applies the assignments in `text` on top of SimConfig::defaults(scenario).
/// A `scenario` key inside the text must agree with the given scenario when one is given.
SimConfig parse_config(std::string_view text, std::optional<Scenario> scenario = std::nullopt);
SimConfig load_config(const std::string& path, std::optional<Scenario> scenario = std::nullopt);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace specdec
