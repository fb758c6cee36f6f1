#include "specdec/experiments.hpp"

#include <chrono>

#include "specdec/bp.hpp"
#include "specdec/elm.hpp"
#include "specdec/errors.hpp"
#include "specdec/fusion.hpp"
#include "specdec/hmm.hpp"
#include "specdec/training_set.hpp"

namespace specdec {
namespace {

enum Stream : std::uint64_t {
  kTrace = 11,
  kElm = 12,
  kBp = 13,
  kLocal = 14,
  kFusionAgent = 15,
  kAccess = 16,
};

RunSummary start_summary(const SimConfig& config) {
  config.validate();
  RunSummary summary;
  summary.config = config;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep)
    summary.seeds.push_back(repetition_seed(config.seed, rep));
  return summary;
}

std::vector<SlotState> target_states(const TrainingSet& data) {
  std::vector<SlotState> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = from_bit(data.targets(static_cast<Eigen::Index>(i)) > 0.5);
  return out;
}

std::vector<SlotState> thresholded(const Eigen::VectorXd& raw, double lambda) {
  std::vector<SlotState> out(static_cast<std::size_t>(raw.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = threshold(raw(static_cast<Eigen::Index>(i)), lambda);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Split {
  TrainingSet train;
  TrainingSet test;
};

// Training targets lie in the first n_train slots, test targets in the rest.
Split split_trace(std::span<const SlotState> states, std::size_t n_train, std::size_t window) {
  if (n_train <= window || n_train >= states.size())
    throw ConfigError("invalid config: training split leaves no training or test samples");
  return {make_training_set(states.first(n_train), window), make_training_set(states.subspan(n_train - window), window)};
}

std::size_t train_length(const SimConfig& config) {
  return static_cast<std::size_t>(static_cast<double>(config.n_slots) * config.train_fraction);
}

std::string event_line(const std::string& method, std::size_t K, std::size_t rep, const DecisionEvent& ev) {
  return R"({"K":)" + std::to_string(K) + R"(,"event":)" + ev.to_json_line() + R"(,"method":")" + method +
         R"(","rep":)" + std::to_string(rep) + "}";
}

void run_access(RunSummary& summary, const AccessEnvironment& env, std::size_t rep, std::uint64_t rep_seed,
                const std::vector<AccessPolicy>& policies, const RunOptions& options) {
  const SimConfig& config = summary.config;
  for (const std::size_t K : config.k_values) {
    const AccessSimParams params = AccessSimParams::from_config(config, K);
    const std::uint64_t seed = mix_seed(mix_seed(rep_seed, kAccess), K);
    for (const AccessPolicy policy : policies) {
      AccessSimulator sim(params, env, policy, seed);
      const std::string method(to_string(policy));
      if (options.collect_events)
        sim.set_event_sink([&](const DecisionEvent& ev) { summary.events.push_back(event_line(method, K, rep, ev)); });
      summary.decision.push_back({method, K, rep, seed, sim.run()});
    }
  }
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep) { return mix_seed(master, rep); }

std::vector<SlotState> noisy_copy(std::span<const SlotState> truth, double error_rate, std::uint64_t seed) {
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw ParameterError("noisy_copy: error rate must be in [0, 1]");
  Rng rng(seed);
  std::vector<SlotState> out(truth.begin(), truth.end());
  for (auto& s : out)
    if (rng.bernoulli(error_rate)) s = from_bit(s == SlotState::idle);
  return out;
}

RunSummary run_prediction_benchmark(const SimConfig& config) {
  RunSummary summary = start_summary(config);
  const std::size_t n_train = train_length(config);
  const auto params = draw_channel_params(config, 0);
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t rep_seed = summary.seeds[rep];
    const ChannelTrace trace = generate_trace(params.front(), config.n_slots, mix_seed(rep_seed, kTrace));
    const Split data = split_trace(trace.states, n_train, config.window);
    const auto actual = target_states(data.test);

    auto t0 = std::chrono::steady_clock::now();
    const ElmModel elm = elm_train(data.train, config.elm_hidden, mix_seed(rep_seed, kElm));
    TrainTimes times;
    times.elm_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const BpModel bp = bp_train(data.train, config.bp, mix_seed(rep_seed, kBp));
    times.bp_seconds = seconds_since(t0);
    summary.timings.push_back({rep, times});

    const Eigen::VectorXd elm_raw = elm.predict_all(data.test.inputs);
    const Eigen::VectorXd bp_raw = bp.predict_all(data.test.inputs);
    for (const auto& [name, raw] : {std::pair{"elm", &elm_raw}, std::pair{"bp", &bp_raw}}) {
      const auto pred = thresholded(*raw, config.lambda);
      PredictionRow row{name, rep, rep_seed, {}, {}};
      row.metrics = eval_prediction(pred, actual, std::span(raw->data(), static_cast<std::size_t>(raw->size())));
      row.near_transition = error_near_transition_fraction(pred, actual);
      summary.prediction.push_back(std::move(row));
    }

    for (const std::size_t n : config.window_sweep) {
      const Split sweep = split_trace(trace.states, n_train, n);
      const ElmModel e = elm_train(sweep.train, config.elm_hidden, mix_seed(rep_seed, kElm));
      const BpModel b = bp_train(sweep.train, config.bp, mix_seed(rep_seed, kBp));
      summary.mse_curve.push_back({n, rep, (e.predict_all(sweep.test.inputs) - sweep.test.targets).squaredNorm() /
                                               static_cast<double>(sweep.test.size()),
                                   (b.predict_all(sweep.test.inputs) - sweep.test.targets).squaredNorm() /
                                       static_cast<double>(sweep.test.size())});
    }
  }
  return summary;
}

RunSummary run_fusion_benchmark(const SimConfig& config) {
  RunSummary summary = start_summary(config);
  const std::size_t n_users = config.error_rates.size();
  if (n_users < 1 || n_users > kMaxFusionUsers) throw ConfigError("invalid config: fusion needs 1..20 error rates");
  const std::size_t n_train = train_length(config);
  const auto params = draw_channel_params(config, 0);
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t rep_seed = summary.seeds[rep];
    const ChannelTrace trace = generate_trace(params.front(), config.n_slots, mix_seed(rep_seed, kTrace));
    const auto& truth = trace.states;
    std::vector<std::vector<SlotState>> local(n_users);
    for (std::size_t i = 0; i < n_users; ++i)
      local[i] = noisy_copy(truth, config.error_rates[i], mix_seed(mix_seed(rep_seed, kLocal), i));

    const std::size_t n = truth.size();
    std::vector<std::uint32_t> states(n);
    std::vector<SlotState> column(n_users);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < n_users; ++i) column[i] = local[i][t];
      states[t] = encode_state(column);
    }

    // Q-fusion learns online; exploration fades out over the training part.
    FusionQTable table(n_users, {config.alpha, config.gamma, config.reward_hit, config.reward_miss, config.epsilon});
    Rng agent(mix_seed(rep_seed, kFusionAgent));
    std::vector<SlotState> q_pred(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double fade = config.epsilon_decay
                              ? std::max(0.0, 1.0 - static_cast<double>(t) / static_cast<double>(n_train))
                              : 1.0;
      table.set_epsilon(config.epsilon * fade);
      q_pred[t] = table.step(states[t], states[t + 1 < n ? t + 1 : t], truth[t], agent);
    }

    const std::span<const SlotState> actual = std::span(truth).subspan(n_train);
    auto add = [&](const std::string& name, std::span<const SlotState> pred) {
      summary.prediction.push_back({name, rep, rep_seed, eval_prediction(pred.subspan(n_train), actual), {}});
    };
    add("q_fusion", q_pred);

    std::vector<double> p_idle(n_users), p_busy(n_users);
    std::vector<std::vector<SlotState>> m_pred(n_users, std::vector<SlotState>(n));
    std::vector<SlotState> soft(n);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < n_users; ++i) {
        column[i] = local[i][t];
        const double e = config.error_rates[i];
        p_busy[i] = column[i] == SlotState::busy ? 1.0 - e : e;
        p_idle[i] = 1.0 - p_busy[i];
      }
      for (std::size_t m = 1; m <= n_users; ++m) m_pred[m - 1][t] = m_out_of_n(column, m);
      soft[t] = soft_fuse(p_idle, p_busy);
    }
    for (std::size_t m = 1; m <= n_users; ++m)
      add("m" + std::to_string(m) + "_of_" + std::to_string(n_users), m_pred[m - 1]);
    add("soft", soft);
    for (std::size_t i = 0; i < n_users; ++i) add("su" + std::to_string(i + 1), local[i]);

    const std::size_t w = std::min(config.window, n_train);
    const HmmModel hmm = hmm_fit(std::span(truth).first(n_train));
    std::vector<SlotState> hmm_pred(n, SlotState::idle);
    for (std::size_t t = n_train; t < n; ++t) hmm_pred[t] = hmm_predict(hmm, std::span(truth).subspan(t - w, w));
    add("hmm", hmm_pred);
  }
  return summary;
}

RunSummary run_recommendation_benchmark(const SimConfig& config, const RunOptions& options) {
  RunSummary summary = start_summary(config);
  if (config.k_values.empty()) throw ConfigError("invalid config: k_values must not be empty");
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const AccessEnvironment env = build_environment(config, summary.seeds[rep], false, false);
    run_access(summary, env, rep, summary.seeds[rep], {AccessPolicy::recommendation, AccessPolicy::random},
               options);
  }
  return summary;
}

RunSummary run_decision_scenario(const SimConfig& config, const RunOptions& options) {
  if (config.scenario != Scenario::decision1 && config.scenario != Scenario::decision2)
    throw ConfigError("invalid config: decision scenario must be decision1 or decision2");
  RunSummary summary = start_summary(config);
  if (config.k_values.empty()) throw ConfigError("invalid config: k_values must not be empty");
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const AccessEnvironment env = build_environment(config, summary.seeds[rep], true, true);
    run_access(summary, env, rep, summary.seeds[rep],
               {AccessPolicy::q_learning, AccessPolicy::mdp, AccessPolicy::random}, options);
  }
  return summary;
}

RunSummary run_scenario(const SimConfig& config, const RunOptions& options) {
  switch (config.scenario) {
    case Scenario::prediction: return run_prediction_benchmark(config);
    case Scenario::fusion: return run_fusion_benchmark(config);
    case Scenario::recommendation: return run_recommendation_benchmark(config, options);
    case Scenario::decision1:
    case Scenario::decision2: return run_decision_scenario(config, options);
  }
  throw ConfigError("invalid config: unknown scenario");
}

}  // namespace specdec
