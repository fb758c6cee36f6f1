#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "specdec/config.hpp"
#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

const Scenario all_scenarios[] = {Scenario::prediction, Scenario::fusion, Scenario::recommendation,
                                  Scenario::decision1, Scenario::decision2};

}  // namespace

TEST_CASE("scenario names round trip") {
  for (auto s : all_scenarios) CHECK(parse_scenario(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scenario("decision3"), ConfigError);
}

TEST_CASE("every scenario default validates") {
  for (auto s : all_scenarios) {
    const auto c = SimConfig::defaults(s);
    CHECK_NOTHROW(c.validate());
    CHECK(c.scenario == s);
  }
  const auto d = SimConfig::defaults(Scenario::decision1);
  CHECK(d.n_channels == 10);
  CHECK(d.n_su == 30);
  CHECK(d.k_values == std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(SimConfig::defaults(Scenario::fusion).error_rates == std::vector<double>{0.1, 0.15, 0.2});
}

TEST_CASE("text form round trips for every scenario") {
  for (auto s : all_scenarios) {
    const auto c = SimConfig::defaults(s);
    const auto back = parse_config(c.to_text());
    CHECK(back.to_text() == c.to_text());
  }
}

TEST_CASE("random doubles survive the text form exactly") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, static_cast<double>(rng.index(20)) - 10.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("assignments, comments and lists") {
  const auto c = parse_config(
      "# header\n"
      "scenario = decision2\n"
      "n_slots = 400   # trailing comment\n"
      "k_values = 3-5, 9\n"
      "channel_params = 5:12, 2.5:18, idle\n"
      "n_channels = 3\n"
      "epsilon_decay = no\n"
      "request_mode = burst\n");
  CHECK(c.scenario == Scenario::decision2);
  CHECK(c.n_slots == 400);
  CHECK(c.k_values == std::vector<std::size_t>{3, 4, 5, 9});
  REQUIRE(c.channel_params.size() == 3);
  CHECK(c.channel_params[0].mean_holding == 5.0);
  CHECK(c.channel_params[0].mean_interarrival == 12.0);
  CHECK(c.channel_params[2].always_idle);
  CHECK_FALSE(c.epsilon_decay);
  CHECK(c.request_mode == RequestMode::burst);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("malformed input raises ConfigError") {
  CHECK_THROWS_AS(parse_config("unknown_key = 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_slots 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_slots = -3"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_slots = 3.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = fast"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_values = 9-3"), ConfigError);
  CHECK_THROWS_AS(parse_config("channel_params = 5"), ConfigError);
  CHECK_THROWS_AS(parse_config("epsilon_decay = maybe"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario = decision3"), ConfigError);
}

TEST_CASE("scenario in the text must match the requested one") {
  CHECK_THROWS_AS(parse_config("scenario = fusion", Scenario::decision1), ConfigError);
  CHECK(parse_config("scenario = fusion", Scenario::fusion).scenario == Scenario::fusion);
  CHECK(parse_config("n_slots = 500", Scenario::prediction).n_slots == 500);
  CHECK(parse_config("").scenario == Scenario::decision1);
}

TEST_CASE("range validation") {
  auto invalid = [](Scenario s, const char* text) {
    const auto c = parse_config(text, s);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  invalid(Scenario::decision1, "alpha = 0");
  invalid(Scenario::decision1, "alpha = 1.5");
  invalid(Scenario::decision1, "gamma = 1");
  invalid(Scenario::decision1, "epsilon = -0.1");
  invalid(Scenario::decision1, "n_channels = 21");
  invalid(Scenario::decision1, "n_channels = 0");
  invalid(Scenario::decision1, "request_prob = 1.2");
  invalid(Scenario::decision1, "k_values = 5\nt_period = 3");
  invalid(Scenario::decision1, "k_values = 0");
  invalid(Scenario::decision1, "warmup_slots = 1000");
  invalid(Scenario::decision1, "n_channels = 3\nchannel_params = 5:12");
  invalid(Scenario::decision1, "holding_min = 0.5");
  invalid(Scenario::decision2, "radius = 0");
  invalid(Scenario::prediction, "train_fraction = 1");
  invalid(Scenario::prediction, "n_slots = 20");
  invalid(Scenario::fusion, "error_rates = 0.1, 0.2");
  invalid(Scenario::fusion, "error_rates = 0.1, 0.2, 1.5");
  invalid(Scenario::fusion, "n_su = 21");
  invalid(Scenario::recommendation, "vi_tol = 0");
  CHECK_NOTHROW(parse_config("k_values = 3\nt_period = 3", Scenario::decision1).validate());
}

TEST_CASE("loading files") {
  const auto dir = std::filesystem::temp_directory_path() / "specdec_config_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "c.cfg").string();
  {
    std::ofstream f(path);
    f << "scenario = recommendation\nn_su = 12\n";
  }
  const auto c = load_config(path);
  CHECK(c.scenario == Scenario::recommendation);
  CHECK(c.n_su == 12);
  CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), IoError);
  std::filesystem::remove_all(dir);
}
