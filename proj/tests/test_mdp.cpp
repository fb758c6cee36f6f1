#include "doctest.h"

#include <cmath>

#include "specdec/channel_model.hpp"
#include "specdec/errors.hpp"
#include "specdec/mdp.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

MdpModel random_mdp(std::size_t n, std::size_t m, Rng& rng) {
  MdpModel model{TransitionModel(n, m, false), Eigen::MatrixXd(n, m)};
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < m; ++a) {
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& x : w) total += (x = rng.uniform());
      TransitionRow row;
      for (std::size_t j = 0; j < n; ++j) row.emplace_back(static_cast<std::uint32_t>(j), w[j] / total);
      model.transitions.set_row(static_cast<std::uint32_t>(s), a, row);
      model.reward(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = rng.uniform(-5.0, 5.0);
    }
  return model;
}

// Dense Bellman optimality operator written independently of the library.
Eigen::VectorXd dense_backup(const MdpModel& model, const Eigen::VectorXd& v, double gamma) {
  const std::size_t n = model.transitions.n_states(), m = model.transitions.n_actions();
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    double best = -1e300;
    for (std::size_t a = 0; a < m; ++a) {
      double q = model.reward(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
      for (std::size_t j = 0; j < n; ++j)
        q += gamma * model.transitions.probability(static_cast<std::uint32_t>(s), a, static_cast<std::uint32_t>(j)) *
             v(static_cast<Eigen::Index>(j));
      best = std::max(best, q);
    }
    out(static_cast<Eigen::Index>(s)) = best;
  }
  return out;
}

}  // namespace

TEST_CASE("two-state identity MDP converges to the geometric series") {
  MdpModel model{TransitionModel(2, 1, true), Eigen::MatrixXd(2, 1)};
  model.transitions.set_row(0, 0, {{0, 1.0}});
  model.transitions.set_row(1, 0, {{1, 1.0}});
  model.reward << 1.0, 0.0;
  const auto r = value_iteration(model, 0.5, 1e-9);
  CHECK(std::abs(r.values(0) - 2.0) < 1e-6);
  CHECK(std::abs(r.values(1) - 0.0) < 1e-6);
  CHECK(r.deltas.size() == r.sweeps);
}

TEST_CASE("gamma zero takes one sweep to the best immediate reward") {
  Rng rng(2);
  const MdpModel model = random_mdp(4, 3, rng);
  const auto r = value_iteration(model, 0.0, 1e-9);
  for (Eigen::Index s = 0; s < 4; ++s) CHECK(r.values(s) == doctest::Approx(model.reward.row(s).maxCoeff()));
  CHECK(r.sweeps <= 2);
}

TEST_CASE("bellman residual bound and contraction on 50 random MDPs") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(5), m = 1 + rng.index(4);
    const MdpModel model = random_mdp(n, m, rng);
    const double gamma = rng.uniform(0.0, 0.95), tol = 1e-6;
    const auto r = value_iteration(model, gamma, tol);
    CHECK(bellman_residual(model, r.values, gamma) < tol / (1.0 - gamma));
    CHECK((dense_backup(model, r.values, gamma) - r.values).lpNorm<Eigen::Infinity>() < tol / (1.0 - gamma));
    for (std::size_t k = 1; k < r.deltas.size(); ++k) CHECK(r.deltas[k] <= gamma * r.deltas[k - 1] + 1e-12);
    // greedy policy attains the maximum action value
    for (std::size_t s = 0; s < n; ++s) {
      const double chosen = action_value(model, r.values, gamma, static_cast<std::uint32_t>(s), r.policy[s]);
      for (std::size_t a = 0; a < m; ++a)
        CHECK(chosen >= action_value(model, r.values, gamma, static_cast<std::uint32_t>(s), a) - 1e-12);
    }
  }
}

TEST_CASE("warm start reaches the same fixed point faster") {
  Rng rng(4);
  const MdpModel model = random_mdp(6, 3, rng);
  const auto cold = value_iteration(model, 0.9, 1e-8);
  const auto warm = value_iteration(model, 0.9, 1e-8, cold.values);
  CHECK(warm.sweeps <= 2);
  CHECK((warm.values - cold.values).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("policy ties go to the lowest action") {
  MdpModel model{TransitionModel(1, 3, true), Eigen::MatrixXd::Constant(1, 3, 2.0)};
  model.transitions.set_row(0, 0, {{0, 1.0}});
  CHECK(value_iteration(model, 0.5).policy[0] == 0);
}

TEST_CASE("value iteration parameter errors") {
  MdpModel model{TransitionModel(1, 1, true), Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(value_iteration(model, 1.0), ParameterError);
  CHECK_THROWS_AS(value_iteration(model, -0.1), ParameterError);
  CHECK_THROWS_AS(value_iteration(model, 0.5, 0.0), ParameterError);
  MdpModel wrong{TransitionModel(2, 1, true), Eigen::MatrixXd::Zero(3, 1)};
  CHECK_THROWS_AS(value_iteration(wrong, 0.5), ParameterError);
}

TEST_CASE("transition rows are validated") {
  TransitionModel t(3, 2, false);
  CHECK_THROWS_AS(t.set_row(0, 0, {{1, 0.7}, {2, 0.5}}), ParameterError);
  CHECK_THROWS_AS(t.set_row(0, 0, {{1, -0.1}}), ParameterError);
  CHECK_THROWS_AS(t.set_row(0, 0, {{3, 0.5}}), ParameterError);
  CHECK_THROWS_AS(t.set_row(3, 0, {{0, 0.5}}), ParameterError);
  t.set_row(1, 1, {{0, 0.25}, {2, 0.75}});
  CHECK(t.probability(1, 1, 2) == 0.75);
  CHECK(t.probability(1, 0, 2) == 0.0);
  CHECK(t.row_sum(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("transition estimate from traces") {
  ChannelTrace alt;
  for (int i = 0; i < 20; ++i) alt.states.push_back(from_bit(i % 2 == 1));
  const auto t = estimate_transitions(std::vector<ChannelTrace>{alt}, 1);
  CHECK(t.probability(0, 0, 1) == doctest::Approx(1.0));
  CHECK(t.probability(1, 0, 0) == doctest::Approx(1.0));
  CHECK(t.action_independent());

  ChannelTrace idle;
  idle.states.assign(10, SlotState::idle);
  const auto t2 = estimate_transitions(std::vector<ChannelTrace>{idle, idle}, 2);
  CHECK(t2.probability(0, 1, 0) == 1.0);
  CHECK(t2.observed(0));
  CHECK_FALSE(t2.observed(3));
  CHECK(t2.probability(3, 0, 3) == 1.0);  // self-loop for unseen states

  ChannelTrace one;
  one.states = {SlotState::idle};
  CHECK_THROWS_AS(estimate_transitions(std::vector<ChannelTrace>{one}, 1), ParameterError);
}

TEST_CASE("estimated rows match a counting oracle and sum to one") {
  std::vector<ChannelParams> params{{10, 5, false}, {12, 3, false}, {15, 8, false}};
  const auto traces = generate_multi(params, 3000, 9);
  const auto t = estimate_transitions(traces, 3);
  std::vector<std::vector<double>> counts(8, std::vector<double>(8, 0.0));
  auto code = [&](std::size_t k) {
    std::uint32_t c = 0;
    for (std::size_t i = 0; i < 3; ++i) c |= static_cast<std::uint32_t>(to_bit(traces[i][k])) << i;
    return c;
  };
  for (std::size_t k = 0; k + 1 < 3000; ++k) counts[code(k)][code(k + 1)] += 1.0;
  for (std::uint32_t s = 0; s < 8; ++s) {
    double total = 0.0;
    for (double c : counts[s]) total += c;
    if (total == 0.0) continue;
    CHECK(std::abs(t.row_sum(s, 0) - 1.0) <= 1e-9);
    for (std::uint32_t j = 0; j < 8; ++j) CHECK(t.probability(s, 2, j) == doctest::Approx(counts[s][j] / total));
  }
}

TEST_CASE("reward estimator keeps running means") {
  RewardEstimator est(4, 2);
  CHECK(est.mean(1, 1) == 0.0);
  est.observe(1, 1, 300);
  est.observe(1, 1, -100);
  CHECK(est.mean(1, 1) == 100);
  CHECK(est.count(1, 1) == 2);
  CHECK(est.means()(1, 1) == 100);
  CHECK_THROWS_AS(est.observe(4, 0, 1.0), ParameterError);
}

TEST_CASE("solution json") {
  MdpModel model{TransitionModel(2, 1, true), Eigen::MatrixXd(2, 1)};
  model.transitions.set_row(0, 0, {{0, 1.0}});
  model.transitions.set_row(1, 0, {{1, 1.0}});
  model.reward << 1.0, 0.0;
  const auto doc = to_json(value_iteration(model, 0.5));
  CHECK(doc.at("kind") == "mdp_solution");
  CHECK(doc.at("policy").size() == 2);
}
