#include "doctest.h"

#include <set>

#include "specdec/decision.hpp"
#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

std::vector<SlotState> unpack(std::uint32_t value, std::size_t n) {
  std::vector<SlotState> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(from_bit((value / (1u << i)) % 2 == 1));
  return out;
}

}  // namespace

TEST_CASE("environment state examples") {
  std::vector<SlotState> s(10, SlotState::idle);
  CHECK(encode_env_state(s) == 0);
  s[0] = SlotState::busy;
  CHECK(encode_env_state(s) == 1);
  CHECK(encode_env_state(std::vector<SlotState>(10, SlotState::busy)) == 1023);
  CHECK_THROWS_AS(encode_env_state(std::vector<SlotState>{}), ParameterError);
  CHECK_THROWS_AS(encode_env_state(std::vector<SlotState>(21, SlotState::idle)), ParameterError);
}

TEST_CASE("environment state is a bijection for M up to 10") {
  for (std::size_t m = 1; m <= 10; ++m) {
    std::set<std::uint32_t> seen;
    for (std::uint32_t v = 0; v < (1u << m); ++v) {
      const auto code = encode_env_state(unpack(v, m));
      CHECK(code == v);
      seen.insert(code);
    }
    CHECK(seen.size() == (std::size_t{1} << m));
  }
}

TEST_CASE("reward table") {
  const SlotState idle = SlotState::idle, busy = SlotState::busy;
  CHECK(reward({false, idle, true}) == 300);
  CHECK(reward({false, idle, false}) == 200);
  CHECK(reward({false, busy, true}) == 200);
  CHECK(reward({false, busy, false}) == 100);
  CHECK(reward({true, idle, true}) == -300);
  CHECK(reward({true, idle, false}) == -200);
  CHECK(reward({true, busy, true}) == -200);
  CHECK(reward({true, busy, false}) == -100);
  for (auto a : {idle, busy})
    for (bool b : {false, true}) CHECK(reward({true, a, b}) == -reward({false, a, b}));
}

TEST_CASE("q update hand values") {
  DecisionQTable t(3, 0.5, 0.5);
  q_update(t, 2, 1, 100, 5);
  CHECK(t.q(2, 1) == 50);
  DecisionQTable frozen(3, 0.0, 0.5);
  frozen.set_q(1, 2, 7.0);
  q_update(frozen, 1, 2, 1000, 3);
  CHECK(frozen.q(1, 2) == 7.0);
}

TEST_CASE("q update is a no-op at the self-loop fixed point") {
  const double r = 120, gamma = 0.5;
  DecisionQTable t(2, 0.5, gamma);
  t.set_q(3, 0, r / (1 - gamma));
  t.update(3, 0, r, 3);
  CHECK(std::abs(t.q(3, 0) - r / (1 - gamma)) <= 1e-12);
}

TEST_CASE("q table bounds and parameters") {
  DecisionQTable t(3, 0.5, 0.5);
  CHECK(t.n_states() == 8);
  CHECK(t.n_actions() == 3);
  CHECK_THROWS_AS(t.q(8, 0), ParameterError);
  CHECK_THROWS_AS(t.q(0, 3), ParameterError);
  CHECK_THROWS_AS(t.set_q(0, 0, std::nan("")), ParameterError);
  CHECK_THROWS_AS(DecisionQTable(3, 1.5, 0.5), ParameterError);
  CHECK_THROWS_AS(DecisionQTable(3, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(DecisionQTable(21, 0.5, 0.5), ParameterError);
  AgentParams p;
  p.epsilon = 2.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("q table json round trip") {
  DecisionQTable t(3, 0.5, 0.25);
  t.set_q(4, 2, -12.5);
  t.set_q(7, 0, 3.0);
  const auto back = DecisionQTable::from_json(nlohmann::json::parse(t.to_json().dump()));
  CHECK(back.alpha() == 0.5);
  CHECK(back.gamma() == 0.25);
  for (std::uint32_t s = 0; s < 8; ++s)
    for (std::size_t a = 0; a < 3; ++a) CHECK(back.q(s, a) == t.q(s, a));
  auto doc = t.to_json();
  doc["kind"] = "other";
  CHECK_THROWS_AS(DecisionQTable::from_json(doc), ParameterError);
}

TEST_CASE("greedy selection") {
  DecisionQTable t(3, 0.5, 0.5);
  t.set_q(0, 0, 5);
  t.set_q(0, 1, 1);
  t.set_q(0, 2, 2);
  Rng rng(1);
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(*select_action(t, 0, all, 0.0, rng) == 0);
  CHECK(*select_action(t, 0, std::vector<std::size_t>{1, 2}, 0.0, rng) == 2);
  CHECK(*select_action(t, 5, std::vector<std::size_t>{2}, 0.9, rng) == 2);
  CHECK_FALSE(select_action(t, 0, std::vector<std::size_t>{}, 0.0, rng).has_value());
  // ties toward the lowest channel
  CHECK(*select_action(t, 3, std::vector<std::size_t>{2, 1}, 0.0, rng) == 1);
}

TEST_CASE("greedy choice is invariant under positive affine rescaling") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    DecisionQTable a(4, 0.5, 0.5), b(4, 0.5, 0.5);
    const double scale = rng.uniform(0.01, 100.0), shift = rng.uniform(-50.0, 50.0);
    for (std::size_t k = 0; k < 4; ++k) {
      const double v = static_cast<double>(rng.index(5)) - 2.0;
      a.set_q(6, k, v);
      b.set_q(6, k, scale * v + shift);
    }
    const std::vector<std::size_t> cand{0, 1, 3};
    CHECK(*select_action(a, 6, cand, 0.0, rng) == *select_action(b, 6, cand, 0.0, rng));
  }
}

TEST_CASE("random access is uniform") {
  Rng rng(11);
  const std::vector<std::size_t> two{0, 1};
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += *random_access(two, rng) == 0;
  CHECK(std::abs(zeros / 100000.0 - 0.5) <= 0.01);
  CHECK(*random_access(std::vector<std::size_t>{4}, rng) == 4);
  CHECK_FALSE(random_access(std::vector<std::size_t>{}, rng).has_value());
}

TEST_CASE("arbitration is a seeded permutation") {
  Rng a(5), b(5);
  const std::vector<std::size_t> req{3, 8, 1, 9, 4};
  const auto x = arbitrate(req, a);
  CHECK(x == arbitrate(req, b));
  CHECK(std::multiset<std::size_t>(x.begin(), x.end()) == std::multiset<std::size_t>(req.begin(), req.end()));
  CHECK(arbitrate(std::vector<std::size_t>{7}, a) == std::vector<std::size_t>{7});
  // every requester is first with probability 1/n
  std::vector<int> first(3, 0);
  Rng r(9);
  for (int i = 0; i < 30000; ++i) ++first[arbitrate(std::vector<std::size_t>{0, 1, 2}, r)[0]];
  for (int f : first) CHECK(std::abs(f / 30000.0 - 1.0 / 3.0) < 0.015);
}

TEST_CASE("ledger grants each channel to one user") {
  ChannelLedger ledger(4);
  std::vector<SlotState> sensed{SlotState::idle, SlotState::busy, SlotState::idle, SlotState::idle};
  CHECK(ledger.candidates(sensed) == std::vector<std::size_t>{0, 2, 3});
  ledger.grant(2, 7);
  CHECK(*ledger.holder(2) == 7);
  CHECK_THROWS_AS(ledger.grant(2, 8), ParameterError);
  CHECK(ledger.candidates(sensed) == std::vector<std::size_t>{0, 3});
  CHECK(ledger.granted_count() == 1);
  ledger.release(2);
  CHECK(ledger.is_free(2));
  CHECK_THROWS_AS(ledger.candidates(std::vector<SlotState>(3)), ParameterError);
}
