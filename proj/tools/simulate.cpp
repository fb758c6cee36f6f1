#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "specdec/config.hpp"
#include "specdec/errors.hpp"
#include "specdec/experiments.hpp"
#include "specdec/report.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

void print_summary(const specdec::RunSummary& summary) {
  using specdec::format_double;
  if (!summary.decision.empty()) {
    std::printf("%-12s %4s %12s %10s\n", "method", "K", "p_collision", "d_e");
    for (const auto& [method, points] : specdec::decision_series(summary.decision))
      for (const auto& p : points) std::printf("%-12s %4zu %12.4f %10.4f\n", method.c_str(), p.K, p.p_collision, p.d_e);
  }
  if (!summary.prediction.empty()) {
    std::map<std::string, std::pair<double, std::size_t>> acc;
    std::vector<std::string> order;
    for (const auto& row : summary.prediction) {
      if (!acc.count(row.method)) order.push_back(row.method);
      acc[row.method].first += row.metrics.accuracy;
      ++acc[row.method].second;
    }
    std::printf("%-12s %10s\n", "method", "accuracy");
    for (const auto& m : order)
      std::printf("%-12s %10.4f\n", m.c_str(), acc[m].first / static_cast<double>(acc[m].second));
  }
  for (const auto& t : summary.timings) {
    std::printf("rep %zu: elm %.4fs bp %.4fs", t.rep, t.times.elm_seconds, t.times.bp_seconds);
    if (t.times.bp_seconds > 0.0)
      std::printf(" I_speed %.2f%% D_time %.4f", specdec::speed_increase_percent(t.times),
                  specdec::time_ratio(t.times));
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive-radio spectrum prediction, fusion, recommendation and decision simulator"};
  std::string scenario_text;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out_dir = "out";
  std::string formats_text = "json,csv";
  bool verbose = false;
  bool timings = false;

  app.add_option("--scenario", scenario_text, "prediction|fusion|recommendation|decision1|decision2")->required();
  app.add_option("--config", config_path, "key = value config file applied over the scenario defaults");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--reps", reps, "repetitions (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", formats_text, "comma-separated subset of json,csv,svg");
  app.add_flag("--verbose", verbose, "also write per-access events as JSON lines");
  app.add_flag("--timings", timings, "also write wall-clock training times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    const specdec::Scenario scenario = specdec::parse_scenario(scenario_text);
    specdec::SimConfig config = config_path.empty() ? specdec::SimConfig::defaults(scenario)
                                                    : specdec::load_config(config_path, scenario);
    if (seed) config.seed = *seed;
    if (reps) config.repetitions = *reps;
    const specdec::OutputFormats formats = specdec::parse_formats(formats_text);

    specdec::RunOptions options;
    options.collect_events = verbose;
    const specdec::RunSummary summary = specdec::run_scenario(config, options);
    const auto written = specdec::emit_outputs(summary, formats, out_dir, {verbose, timings});
    print_summary(summary);
    for (const auto& path : written) std::printf("wrote %s\n", path.string().c_str());
  } catch (const specdec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const specdec::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const specdec::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
  return 0;
}
