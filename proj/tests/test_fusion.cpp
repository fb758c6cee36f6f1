#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "specdec/channel_model.hpp"
#include "specdec/errors.hpp"
#include "specdec/experiments.hpp"
#include "specdec/fusion.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

std::vector<SlotState> bits(std::initializer_list<int> v) {
  std::vector<SlotState> out;
  for (int b : v) out.push_back(from_bit(b != 0));
  return out;
}

// Brute-force unpacking of an integer into n bits, least significant first.
std::vector<SlotState> unpack(std::uint32_t value, std::size_t n) {
  std::vector<SlotState> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(from_bit((value / (1u << i)) % 2 == 1));
  return out;
}

// Majority-of-three error probability by enumerating all error patterns.
double majority_error(const std::vector<double>& e) {
  double err = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    double p = 1.0;
    int wrong = 0;
    for (int i = 0; i < 3; ++i) {
      const bool w = (mask >> i) & 1;
      p *= w ? e[i] : 1.0 - e[i];
      wrong += w;
    }
    if (wrong >= 2) err += p;
  }
  return err;
}

// Maximum a posteriori action for a vector of local predictions.
SlotState bayes_action(const std::vector<SlotState>& preds, const std::vector<double>& e, double prior_busy) {
  double busy = prior_busy, idle = 1.0 - prior_busy;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool says_busy = preds[i] == SlotState::busy;
    busy *= says_busy ? 1.0 - e[i] : e[i];
    idle *= says_busy ? e[i] : 1.0 - e[i];
  }
  return busy > idle ? SlotState::busy : SlotState::idle;
}

}  // namespace

TEST_CASE("state encoding examples") {
  CHECK(encode_state(bits({1, 0, 1})) == 5);
  CHECK(encode_state(bits({0, 0, 0})) == 0);
  CHECK(encode_state(bits({1, 1, 1})) == 7);
  CHECK_THROWS_AS(encode_state(std::vector<SlotState>{}), ParameterError);
  CHECK_THROWS_AS(encode_state(std::vector<SlotState>(21, SlotState::idle)), ParameterError);
}

TEST_CASE("state encoding is a bijection for N up to 10") {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<bool> hit(std::size_t{1} << n, false);
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      const auto b = unpack(v, n);
      const auto code = encode_state(b);
      REQUIRE(code < hit.size());
      CHECK_FALSE(hit[code]);
      hit[code] = true;
      CHECK(code == v);
      CHECK(decode_bits(code, n) == b);
    }
  }
}

TEST_CASE("single q step against a hand update") {
  FusionQTable t(3, {0.5, 0.0, 1.0, -1.0, 0.0});
  Rng rng(1);
  // ties go to idle, so the action is idle; matching the truth earns R_p
  CHECK(t.step(2, 3, SlotState::idle, rng) == SlotState::idle);
  CHECK(t.q(2, SlotState::idle) == doctest::Approx(0.5));
  CHECK(t.q(2, SlotState::busy) == 0.0);
  // a miss earns R_n
  CHECK(t.step(5, 3, SlotState::busy, rng) == SlotState::idle);
  CHECK(t.q(5, SlotState::idle) == doctest::Approx(-0.5));
}

TEST_CASE("greedy picks the larger value and returns the pre-update action") {
  FusionQTable t(2, {0.5, 0.5, 1.0, -1.0, 0.0});
  t.set_q(1, SlotState::idle, 2.0);
  t.set_q(1, SlotState::busy, 1.0);
  Rng rng(3);
  CHECK(t.greedy(1) == SlotState::idle);
  CHECK(t.step(1, 1, SlotState::busy, rng) == SlotState::idle);
  // Q(1,idle) = 2 + 0.5 * (-1 + 0.5 * 2 - 2) = 1
  CHECK(t.q(1, SlotState::idle) == doctest::Approx(1.0));
}

TEST_CASE("q value converges geometrically to a constant reward") {
  const double alpha = 0.3;
  FusionQTable t(1, {alpha, 0.0, 1.0, -1.0, 0.0});
  t.set_q(0, SlotState::busy, -5.0);  // keep idle as the greedy action
  Rng rng(2);
  for (int k = 1; k <= 30; ++k) {
    t.step(0, 0, SlotState::idle, rng);
    CHECK(t.q(0, SlotState::idle) == doctest::Approx(1.0 - std::pow(1.0 - alpha, k)));
  }
}

TEST_CASE("greedy action is a pure function of the state when frozen") {
  FusionQTable t(3, {0.1, 0.5, 1.0, -1.0, 0.0});
  Rng rng(8);
  for (std::uint32_t s = 0; s < 8; ++s) t.set_q(s, SlotState::busy, rng.uniform(-1.0, 1.0));
  for (std::uint32_t s = 0; s < 8; ++s) {
    FusionQTable a = t, b = t;
    Rng r1(1), r2(99);
    CHECK(a.step(s, 0, SlotState::idle, r1) == b.step(s, 0, SlotState::busy, r2));
  }
}

TEST_CASE("out of range states and invalid params") {
  FusionQTable t(2, {});
  Rng rng(1);
  CHECK_THROWS_AS(t.step(4, 0, SlotState::idle, rng), ParameterError);
  CHECK_THROWS_AS(t.step(0, 4, SlotState::idle, rng), ParameterError);
  CHECK_THROWS_AS(t.q(7, SlotState::idle), ParameterError);
  CHECK_THROWS_AS(FusionQTable(0, {}), ParameterError);
  CHECK_THROWS_AS(FusionQTable(2, {0.0, 0.5, 1, -1, 0}), ParameterError);
  CHECK_THROWS_AS(FusionQTable(2, {0.1, 1.0, 1, -1, 0}), ParameterError);
  CHECK_THROWS_AS(t.set_epsilon(1.5), ParameterError);
}

TEST_CASE("epsilon one explores both actions") {
  FusionQTable t(1, {0.1, 0.0, 1.0, -1.0, 1.0});
  Rng rng(4);
  int busy = 0;
  for (int i = 0; i < 2000; ++i) busy += to_bit(t.step(0, 0, SlotState::idle, rng));
  CHECK((busy > 800 && busy < 1200));
}

TEST_CASE("q table csv") {
  FusionQTable t(2, {});
  t.set_q(3, SlotState::busy, 0.25);
  std::ostringstream out;
  t.write_csv(out);
  CHECK(out.str() == "state,q_idle,q_busy\n0,0,0\n1,0,0\n2,0,0\n3,0,0.25\n");
}

TEST_CASE("m out of n rules") {
  CHECK(m_out_of_n(bits({1, 1, 0}), 2) == SlotState::busy);
  CHECK(m_out_of_n(bits({1, 0, 0}), 1) == SlotState::busy);
  CHECK(m_out_of_n(bits({1, 1, 0}), 3) == SlotState::idle);
  CHECK_THROWS_AS(m_out_of_n(bits({1, 1, 0}), 0), ParameterError);
  CHECK_THROWS_AS(m_out_of_n(bits({1, 1, 0}), 4), ParameterError);
}

TEST_CASE("m out of n is monotone in every input") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::uint32_t v = 0; v < (1u << n); ++v)
      for (std::size_t m = 1; m <= n; ++m) {
        const auto base = unpack(v, n);
        for (std::size_t i = 0; i < n; ++i) {
          if (base[i] == SlotState::busy) continue;
          auto up = base;
          up[i] = SlotState::busy;
          CHECK(to_bit(m_out_of_n(up, m)) >= to_bit(m_out_of_n(base, m)));
        }
      }
}

TEST_CASE("soft combining") {
  CHECK(soft_fuse(std::vector<double>{0.9, 0.8, 0.6}, std::vector<double>{0.1, 0.2, 0.4}) == SlotState::idle);
  CHECK(soft_fuse(std::vector<double>{0.1, 0.2, 0.3}, std::vector<double>{0.9, 0.8, 0.7}) == SlotState::busy);
  CHECK(soft_fuse(std::vector<double>{0.5, 0.3}, std::vector<double>{0.5, 0.3}) == SlotState::idle);
  CHECK_THROWS_AS(soft_fuse(std::vector<double>{0.0}, std::vector<double>{0.0}), ParameterError);
  CHECK_THROWS_AS(soft_fuse(std::vector<double>{0.5}, std::vector<double>{0.5, 0.5}), ParameterError);
}

TEST_CASE("soft combining is scale invariant per term") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p0(4), p1(4);
    for (std::size_t i = 0; i < 4; ++i) {
      p0[i] = rng.uniform(0.01, 1.0);
      p1[i] = rng.uniform(0.01, 1.0);
    }
    const auto base = soft_fuse(p0, p1);
    const std::size_t k = rng.index(4);
    const double c = rng.uniform(0.1, 10.0);
    p0[k] *= c;
    p1[k] *= c;
    CHECK(soft_fuse(p0, p1) == base);
  }
}

TEST_CASE("converged fusion policy matches the Bayes rule") {
  const std::vector<double> e{0.1, 0.15, 0.2};
  const auto truth = generate_trace({10.0, 10.0, false}, 10000, 21).states;
  std::vector<std::vector<SlotState>> local;
  for (std::size_t i = 0; i < 3; ++i) local.push_back(noisy_copy(truth, e[i], 300 + i));
  std::vector<std::uint32_t> states(truth.size());
  for (std::size_t t = 0; t < truth.size(); ++t) states[t] = encode_state(std::vector{local[0][t], local[1][t], local[2][t]});

  FusionQTable table(3, {0.1, 0.5, 1.0, -1.0, 0.1});
  Rng rng(6);
  for (std::size_t t = 0; t < truth.size(); ++t) {
    table.set_epsilon(0.1 * std::max(0.0, 1.0 - static_cast<double>(t) / 5000.0));
    table.step(states[t], states[std::min(t + 1, truth.size() - 1)], truth[t], rng);
  }
  int agree = 0;
  for (std::uint32_t s = 0; s < 8; ++s) agree += table.greedy(s) == bayes_action(unpack(s, 3), e, 0.5);
  CHECK(agree >= 7);
}

TEST_CASE("noisy copies flip at the configured rate") {
  const std::vector<SlotState> truth(100000, SlotState::idle);
  const auto copy = noisy_copy(truth, 0.15, 2);
  std::size_t flips = 0;
  for (auto s : copy) flips += static_cast<std::size_t>(to_bit(s));
  CHECK(static_cast<double>(flips) / 1e5 == doctest::Approx(0.15).epsilon(0.03));
  CHECK(noisy_copy(truth, 0.0, 2) == truth);
  CHECK_THROWS_AS(noisy_copy(truth, 1.5, 2), ParameterError);
}

TEST_CASE("fusion benchmark reproduces the analytic majority accuracy") {
  SimConfig cfg = SimConfig::defaults(Scenario::fusion);
  cfg.repetitions = 3;
  const auto summary = run_fusion_benchmark(cfg);
  const double oracle = 1.0 - majority_error(cfg.error_rates);
  CHECK(oracle == doctest::Approx(0.941).epsilon(1e-9));
  for (const auto& row : summary.prediction)
    if (row.method == "m2_of_3") CHECK(std::abs(row.metrics.accuracy - oracle) < 0.01);
}

TEST_CASE("perfect local predictors make every fusion rule exact") {
  SimConfig cfg = SimConfig::defaults(Scenario::fusion);
  cfg.error_rates = {0.0, 0.0, 0.0};
  const auto summary = run_fusion_benchmark(cfg);
  for (const auto& row : summary.prediction)
    if (row.method != "hmm") CHECK_MESSAGE(row.metrics.accuracy == 1.0, row.method);
}

TEST_CASE("OR rule detects more busy slots than AND on a busy-heavy channel") {
  SimConfig cfg = SimConfig::defaults(Scenario::fusion);
  cfg.channel_params = {{5.0, 20.0, false}};
  const auto summary = run_fusion_benchmark(cfg);
  double or_pd = -1, and_pd = -1;
  for (const auto& row : summary.prediction) {
    if (row.method == "m1_of_3") or_pd = *row.metrics.p_d;
    if (row.method == "m3_of_3") and_pd = *row.metrics.p_d;
  }
  CHECK(or_pd > and_pd);
}
