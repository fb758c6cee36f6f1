#include "specdec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': cannot read '" + std::string(value) + "' as " +
                    std::string(expected));
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "a non-negative integer");
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  return static_cast<std::size_t>(parse_u64(key, v));
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

std::vector<std::size_t> parse_count_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  if (v.empty()) return out;
  for (auto item : split(v, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string_view::npos && dash > 0) {
      const auto lo = parse_count(key, trim(item.substr(0, dash)));
      const auto hi = parse_count(key, trim(item.substr(dash + 1)));
      if (hi < lo) bad_value(key, item, "an ascending range");
      for (auto k = lo; k <= hi; ++k) out.push_back(k);
    } else {
      out.push_back(parse_count(key, item));
    }
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  if (v.empty()) return out;
  for (auto item : split(v, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<ChannelParams> parse_channels(std::string_view key, std::string_view v) {
  std::vector<ChannelParams> out;
  if (v.empty()) return out;
  for (auto item : split(v, ',')) {
    if (item == "idle") {
      out.push_back(ChannelParams::idle_channel());
      continue;
    }
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) bad_value(key, item, "holding:interarrival or idle");
    out.push_back({parse_double(key, trim(item.substr(colon + 1))), parse_double(key, trim(item.substr(0, colon))),
                   false});
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

std::string count_text(std::size_t v) { return std::to_string(v); }

struct Field {
  std::function<void(SimConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const SimConfig&)> get;
};

#define SPECDEC_DOUBLE(member) \
  Field { [](SimConfig& c, std::string_view k, std::string_view v) { c.member = parse_double(k, v); }, \
          [](const SimConfig& c) { return format_double(c.member); } }
#define SPECDEC_COUNT(member) \
  Field { [](SimConfig& c, std::string_view k, std::string_view v) { c.member = parse_count(k, v); }, \
          [](const SimConfig& c) { return count_text(c.member); } }
#define SPECDEC_BOOL(member) \
  Field { [](SimConfig& c, std::string_view k, std::string_view v) { c.member = parse_bool(k, v); }, \
          [](const SimConfig& c) { return std::string(c.member ? "true" : "false"); } }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"scenario",
       {[](SimConfig& c, std::string_view, std::string_view v) { c.scenario = parse_scenario(v); },
        [](const SimConfig& c) { return std::string(to_string(c.scenario)); }}},
      {"seed",
       {[](SimConfig& c, std::string_view k, std::string_view v) { c.seed = parse_u64(k, v); },
        [](const SimConfig& c) { return std::to_string(c.seed); }}},
      {"repetitions", SPECDEC_COUNT(repetitions)},
      {"n_channels", SPECDEC_COUNT(n_channels)},
      {"channel_params",
       {[](SimConfig& c, std::string_view k, std::string_view v) { c.channel_params = parse_channels(k, v); },
        [](const SimConfig& c) {
          return join<ChannelParams>(c.channel_params, [](const ChannelParams& p) {
            return p.always_idle ? std::string("idle")
                                 : format_double(p.mean_holding) + ":" + format_double(p.mean_interarrival);
          });
        }}},
      {"holding_min", SPECDEC_DOUBLE(holding_min)},
      {"holding_max", SPECDEC_DOUBLE(holding_max)},
      {"interarrival_min", SPECDEC_DOUBLE(interarrival_min)},
      {"interarrival_max", SPECDEC_DOUBLE(interarrival_max)},
      {"last_channel_idle", SPECDEC_BOOL(last_channel_idle)},
      {"n_slots", SPECDEC_COUNT(n_slots)},
      {"window", SPECDEC_COUNT(window)},
      {"elm_hidden", SPECDEC_COUNT(elm_hidden)},
      {"bp_hidden", SPECDEC_COUNT(bp.hidden_count)},
      {"bp_learning_rate", SPECDEC_DOUBLE(bp.learning_rate)},
      {"bp_max_epochs", SPECDEC_COUNT(bp.max_epochs)},
      {"bp_goal_mse", SPECDEC_DOUBLE(bp.goal_mse)},
      {"lambda", SPECDEC_DOUBLE(lambda)},
      {"train_fraction", SPECDEC_DOUBLE(train_fraction)},
      {"window_sweep",
       {[](SimConfig& c, std::string_view k, std::string_view v) { c.window_sweep = parse_count_list(k, v); },
        [](const SimConfig& c) { return join<std::size_t>(c.window_sweep, count_text); }}},
      {"history_slots", SPECDEC_COUNT(history_slots)},
      {"n_su", SPECDEC_COUNT(n_su)},
      {"error_rates",
       {[](SimConfig& c, std::string_view k, std::string_view v) { c.error_rates = parse_double_list(k, v); },
        [](const SimConfig& c) { return join<double>(c.error_rates, format_double); }}},
      {"reward_hit", SPECDEC_DOUBLE(reward_hit)},
      {"reward_miss", SPECDEC_DOUBLE(reward_miss)},
      {"alpha", SPECDEC_DOUBLE(alpha)},
      {"gamma", SPECDEC_DOUBLE(gamma)},
      {"epsilon", SPECDEC_DOUBLE(epsilon)},
      {"epsilon_decay", SPECDEC_BOOL(epsilon_decay)},
      {"vi_tol", SPECDEC_DOUBLE(vi_tol)},
      {"k_values",
       {[](SimConfig& c, std::string_view k, std::string_view v) { c.k_values = parse_count_list(k, v); },
        [](const SimConfig& c) { return join<std::size_t>(c.k_values, count_text); }}},
      {"t_period", SPECDEC_COUNT(t_period)},
      {"request_mode",
       {[](SimConfig& c, std::string_view k, std::string_view v) {
          if (v == "probability") c.request_mode = RequestMode::probability;
          else if (v == "burst") c.request_mode = RequestMode::burst;
          else bad_value(k, v, "probability or burst");
        },
        [](const SimConfig& c) {
          return std::string(c.request_mode == RequestMode::burst ? "burst" : "probability");
        }}},
      {"request_prob", SPECDEC_DOUBLE(request_prob)},
      {"score_window", SPECDEC_COUNT(score_window)},
      {"th_mode",
       {[](SimConfig& c, std::string_view k, std::string_view v) {
          if (v == "half_max") c.th_mode = ThresholdMode::half_max;
          else if (v == "fixed") c.th_mode = ThresholdMode::fixed;
          else bad_value(k, v, "half_max or fixed");
        },
        [](const SimConfig& c) { return std::string(c.th_mode == ThresholdMode::fixed ? "fixed" : "half_max"); }}},
      {"th_value", SPECDEC_DOUBLE(th_value)},
      {"warmup_slots", SPECDEC_COUNT(warmup_slots)},
      {"arena_side", SPECDEC_DOUBLE(arena_side)},
      {"radius", SPECDEC_DOUBLE(radius)},
  };
  return table;
}

#undef SPECDEC_DOUBLE
#undef SPECDEC_COUNT
#undef SPECDEC_BOOL

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields())
    if (name == key) return &field;
  return nullptr;
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi, std::size_t step = 1) {
  std::vector<std::size_t> out;
  for (auto k = lo; k <= hi; k += step) out.push_back(k);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::prediction: return "prediction";
    case Scenario::fusion: return "fusion";
    case Scenario::recommendation: return "recommendation";
    case Scenario::decision1: return "decision1";
    case Scenario::decision2: return "decision2";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text) {
  for (auto s : {Scenario::prediction, Scenario::fusion, Scenario::recommendation, Scenario::decision1,
                 Scenario::decision2})
    if (to_string(s) == text) return s;
  throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

SimConfig SimConfig::defaults(Scenario scenario) {
  SimConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::prediction:
      c.n_channels = 1;
      c.channel_params = {{10.0, 10.0, false}};
      c.last_channel_idle = false;
      c.n_slots = 10000;
      c.window_sweep = range(2, 16, 2);
      break;
    case Scenario::fusion:
      c.n_channels = 1;
      c.channel_params = {{10.0, 10.0, false}};
      c.last_channel_idle = false;
      c.n_slots = 10000;
      c.n_su = 3;
      c.error_rates = {0.1, 0.15, 0.2};
      c.alpha = 0.1;
      break;
    case Scenario::recommendation:
      c.n_channels = 5;
      c.n_su = 10;
      c.k_values = range(3, 10);
      break;
    case Scenario::decision1:
    case Scenario::decision2:
      c.n_channels = 10;
      c.n_su = 30;
      c.k_values = range(3, 10);
      break;
  }
  return c;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (repetitions < 1) fail("repetitions must be at least 1");
  if (n_channels < 1 || n_channels > 20) fail("n_channels must be in 1..20");
  if (n_slots < 1) fail("n_slots must be positive");
  if (!channel_params.empty() && channel_params.size() != n_channels)
    fail("channel_params must list exactly n_channels entries");
  try {
    for (const auto& p : channel_params) p.validate();
    bp.validate();
  } catch (const ParameterError& e) {
    fail(e.what());
  }
  if (channel_params.empty()) {
    if (!(holding_min >= 1.0 && holding_max >= holding_min)) fail("holding range must satisfy 1 <= min <= max");
    if (!(interarrival_min > 0.0 && interarrival_max >= interarrival_min))
      fail("interarrival range must satisfy 0 < min <= max");
  }
  if (window < 1 || elm_hidden < 1) fail("window and elm_hidden must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail("train_fraction must be in (0, 1)");
  for (auto n : window_sweep)
    if (n < 1) fail("window_sweep entries must be positive");
  if (!std::isfinite(lambda)) fail("lambda must be finite");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must be in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0, 1]");
  if (!(vi_tol > 0.0)) fail("vi_tol must be positive");
  if (n_su < 1) fail("n_su must be positive");

  switch (scenario) {
    case Scenario::prediction:
      if (static_cast<double>(n_slots) * train_fraction <= static_cast<double>(window) + 1)
        fail("training segment is shorter than the window");
      break;
    case Scenario::fusion:
      if (n_su > 20) fail("fusion supports at most 20 secondary users");
      if (error_rates.size() != n_su) fail("error_rates must list one rate per secondary user");
      for (double e : error_rates)
        if (!(e >= 0.0 && e <= 1.0)) fail("error rates must be in [0, 1]");
      if (n_slots < 2 * window + 2) fail("n_slots too short for the HMM window");
      break;
    case Scenario::recommendation:
    case Scenario::decision1:
    case Scenario::decision2:
      if (k_values.empty()) fail("k_values must not be empty");
      for (auto k : k_values) {
        if (k < 1) fail("K must be positive");
        if (t_period != 0 && k > t_period) fail("every K must satisfy K <= T");
      }
      if (!(request_prob >= 0.0 && request_prob <= 1.0)) fail("request_prob must be in [0, 1]");
      if (score_window < 1) fail("score_window must be positive");
      if (th_mode == ThresholdMode::fixed && !std::isfinite(th_value)) fail("th_value must be finite");
      if (warmup_slots >= n_slots) fail("warmup_slots must be shorter than n_slots");
      if (scenario != Scenario::recommendation && history_slots < window + 2)
        fail("history_slots must exceed the prediction window");
      if (scenario == Scenario::decision2 && !(arena_side > 0.0 && radius > 0.0))
        fail("arena_side and radius must be positive");
      break;
  }
}

std::vector<std::pair<std::string, std::string>> SimConfig::to_key_values() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(*this));
  return out;
}

std::string SimConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_key_values()) out += k + " = " + v + "\n";
  return out;
}

SimConfig parse_config(std::string_view text, std::optional<Scenario> scenario) {
  struct Assignment {
    std::size_t line;
    std::string key;
    std::string value;
  };
  std::vector<Assignment> assignments;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Scenario> from_text;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!find_field(key)) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (key == "scenario") from_text = parse_scenario(value);
    assignments.push_back({line_no, key, value});
  }
  if (scenario && from_text && *scenario != *from_text)
    throw ConfigError("config scenario '" + std::string(to_string(*from_text)) + "' conflicts with requested '" +
                      std::string(to_string(*scenario)) + "'");
  const Scenario chosen = scenario ? *scenario : from_text.value_or(Scenario::decision1);

  SimConfig config = SimConfig::defaults(chosen);
  for (const auto& a : assignments) find_field(a.key)->set(config, a.key, a.value);
  config.scenario = chosen;
  return config;
}

SimConfig load_config(const std::string& path, std::optional<Scenario> scenario) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config(buf.str(), scenario);
}

}  // namespace specdec
