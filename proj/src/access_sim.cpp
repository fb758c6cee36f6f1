#include "specdec/access_sim.hpp"

#include <algorithm>

#include "json.hpp"

#include "specdec/elm.hpp"
#include "specdec/errors.hpp"
#include "specdec/training_set.hpp"

namespace specdec {
namespace {

// Sub-seed streams of one repetition.
enum Stream : std::uint64_t {
  kChannelParams = 1,
  kTraces = 2,
  kPredictors = 3,
  kLocations = 4,
};

// Sub-seed streams of one simulator run.
enum RunStream : std::uint64_t {
  kRequests = 0,
  kArbitration = 1,
  kAgent = 2,
};

}  // namespace

std::string_view to_string(AccessPolicy p) {
  switch (p) {
    case AccessPolicy::random: return "random";
    case AccessPolicy::recommendation: return "cf";
    case AccessPolicy::q_learning: return "q_learning";
    case AccessPolicy::mdp: return "mdp";
  }
  return "unknown";
}

AccessSimParams AccessSimParams::from_config(const SimConfig& config, std::size_t K) {
  AccessSimParams p;
  p.n_su = config.n_su;
  p.n_slots = config.n_slots;
  p.warmup_slots = config.warmup_slots;
  p.K = K;
  p.period = config.period_for(K);
  p.request_mode = config.request_mode;
  p.request_prob = config.request_prob;
  p.score_window = config.score_window;
  if (config.th_mode == ThresholdMode::fixed) p.fixed_threshold = config.th_value;
  p.use_locations = config.scenario == Scenario::decision2;
  p.agent = {config.alpha, config.gamma, config.epsilon};
  p.epsilon_decay = config.epsilon_decay;
  p.vi_tol = config.vi_tol;
  return p;
}

std::vector<ChannelParams> draw_channel_params(const SimConfig& config, std::uint64_t seed) {
  if (!config.channel_params.empty()) return config.channel_params;
  Rng rng(seed);
  std::vector<ChannelParams> params(config.n_channels);
  for (std::size_t c = 0; c < params.size(); ++c) {
    params[c].mean_holding = rng.uniform(config.holding_min, config.holding_max);
    params[c].mean_interarrival = rng.uniform(config.interarrival_min, config.interarrival_max);
  }
  if (config.last_channel_idle) params.back() = ChannelParams::idle_channel();
  return params;
}

AccessEnvironment build_environment(const SimConfig& config, std::uint64_t rep_seed, bool with_predictions,
                                    bool with_transitions) {
  AccessEnvironment env;
  env.history = with_predictions || with_transitions ? config.history_slots : 0;
  const std::size_t k_max =
      config.k_values.empty() ? 1 : *std::max_element(config.k_values.begin(), config.k_values.end());
  const std::size_t length = env.history + config.n_slots + k_max + 2;
  const auto params = draw_channel_params(config, mix_seed(rep_seed, kChannelParams));
  env.traces = generate_multi(params, length, mix_seed(rep_seed, kTraces));

  if (with_predictions) {
    const std::size_t n = config.window;
    env.predicted_next.assign(env.traces.size(), std::vector<SlotState>(length, SlotState::idle));
    for (std::size_t c = 0; c < env.traces.size(); ++c) {
      const auto& states = env.traces[c].states;
      const TrainingSet history = make_training_set(std::span(states).first(env.history), n);
      const ElmModel elm =
          elm_train(history, config.elm_hidden, mix_seed(mix_seed(rep_seed, kPredictors), c));
      const TrainingSet all = make_training_set(states, n);
      const Eigen::VectorXd raw = elm.predict_all(all.inputs);
      // sample s ends at index s + n - 1 and predicts index s + n
      for (Eigen::Index s = 0; s < raw.size(); ++s)
        env.predicted_next[c][static_cast<std::size_t>(s) + n - 1] = threshold(raw(s), config.lambda);
    }
  }

  if (with_transitions) {
    std::vector<ChannelTrace> history(env.traces.size());
    for (std::size_t c = 0; c < history.size(); ++c) {
      history[c] = env.traces[c];
      history[c].states.resize(env.history);
    }
    env.transitions = estimate_transitions(history, env.traces.size());
  }

  if (config.scenario == Scenario::decision2)
    env.locations = place_users(config.n_su, config.arena_side, config.radius, mix_seed(rep_seed, kLocations));
  return env;
}

void DecisionMetrics::finalize() {
  if (n_total == 0) {
    p_collision = 0.0;
    d_e = 0.0;
    return;
  }
  p_collision = static_cast<double>(n_collision) / static_cast<double>(n_total);
  d_e = static_cast<double>(d_success) / static_cast<double>(n_total);
}

std::string DecisionEvent::to_json_line() const {
  return nlohmann::json{{"slot", slot},
                        {"su", su},
                        {"state", state},
                        {"action", action},
                        {"A", to_bit(prediction)},
                        {"B", recommended ? 1 : 0},
                        {"recommendation", recommendation},
                        {"reward", reward},
                        {"collision", collision},
                        {"rating", rating},
                        {"resolved_at", resolved_at},
                        {"counted", counted}}
      .dump();
}

AccessSimulator::AccessSimulator(const AccessSimParams& params, const AccessEnvironment& env,
                                 AccessPolicy policy, std::uint64_t seed)
    : params_(params),
      env_(env),
      policy_(policy),
      request_rng_(mix_seed(seed, kRequests)),
      arbitration_rng_(mix_seed(seed, kArbitration)),
      agent_rng_(mix_seed(seed, kAgent)),
      ledger_(env.n_channels()),
      su_busy_(params.n_su, false),
      holds_(env.n_channels()),
      scores_(params.n_su, env.n_channels(), static_cast<std::uint32_t>(params.K)) {
  if (env.n_channels() < 1 || env.n_channels() > kMaxDecisionChannels)
    throw ParameterError("AccessSimulator: need 1..20 channels");
  if (params.K < 1) throw ParameterError("AccessSimulator: K must be positive");
  params.agent.validate();
  const std::size_t needed = env.history + params.n_slots + params.K + 1;
  for (const auto& tr : env.traces)
    if (tr.size() < needed) throw ParameterError("AccessSimulator: traces too short for the horizon");

  if (policy == AccessPolicy::q_learning)
    q_table_.emplace(env.n_channels(), params.agent.alpha, params.agent.gamma);
  if (policy == AccessPolicy::mdp) {
    if (!env.transitions) throw ParameterError("AccessSimulator: MDP policy needs a transition estimate");
    const std::size_t n_states = env.transitions->n_states();
    rewards_.emplace(n_states, env.n_channels());
    mdp_.emplace(MdpModel{*env.transitions, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_states),
                                                                  static_cast<Eigen::Index>(env.n_channels()))});
    mdp_dirty_ = true;
  }
  if (params.use_locations) {
    if (env.locations.size() != params.n_su)
      throw ParameterError("AccessSimulator: one location per secondary user required");
    neighbor_lists_.resize(params.n_su);
    for (std::size_t k = 0; k < params.n_su; ++k) neighbor_lists_[k] = neighbors(env.locations, k);
  }
}

bool AccessSimulator::done() const {
  if (t_ < params_.n_slots) return false;
  return std::none_of(holds_.begin(), holds_.end(), [](const auto& h) { return h.has_value(); });
}

double AccessSimulator::epsilon_at(std::size_t t) const {
  if (!params_.epsilon_decay) return params_.agent.epsilon;
  const double half = static_cast<double>(params_.n_slots) / 2.0;
  return params_.agent.epsilon * std::max(0.0, 1.0 - static_cast<double>(t) / half);
}

std::uint32_t AccessSimulator::env_state_at(std::size_t t) const {
  std::vector<SlotState> sensed(env_.n_channels());
  for (std::size_t c = 0; c < sensed.size(); ++c) sensed[c] = env_.sensed(c, t);
  return encode_env_state(sensed);
}

bool AccessSimulator::step() {
  if (done()) return false;
  resolve_holds();
  if (mdp_dirty_) resolve_mdp();

  std::vector<SlotState> sensed(env_.n_channels());
  for (std::size_t c = 0; c < sensed.size(); ++c) sensed[c] = env_.sensed(c, t_);
  const std::uint32_t state = encode_env_state(sensed);
  if (t_ < params_.n_slots) grant_requests(sensed, state);

  audit_ = {t_, ledger_.granted_count(), 0, 0};
  for (std::size_t c = 0; c < sensed.size(); ++c) {
    if (sensed[c] == SlotState::busy) ++audit_.pu_busy;
    else if (ledger_.is_free(c)) ++audit_.free;
  }
  ++t_;
  metrics_.finalize();
  return !done();
}

const DecisionMetrics& AccessSimulator::run() {
  while (step()) {
  }
  return metrics_;
}

void AccessSimulator::resolve_holds() {
  for (std::size_t c = 0; c < holds_.size(); ++c) {
    if (!holds_[c]) continue;
    Hold& hold = *holds_[c];
    if (t_ == hold.start + params_.K) finish(hold, false);
    else if (t_ > hold.start && env_.sensed(c, t_) == SlotState::busy) finish(hold, true);
  }
}

void AccessSimulator::finish(Hold& hold, bool collision) {
  const std::size_t channel = hold.channel;
  const std::size_t transmitted = collision ? t_ - hold.start : params_.K;
  const std::uint32_t rating = score_access(transmitted, params_.K);
  scores_.append({hold.su, channel, t_, rating});

  const double r = reward({collision, hold.prediction, hold.recommended});
  const std::uint32_t next_state = env_state_at(hold.start + 1);
  if (q_table_) q_table_->update(hold.state, channel, r, next_state);
  if (rewards_) {
    rewards_->observe(hold.state, channel, r);
    mdp_dirty_ = true;
  }

  const bool counted = hold.start >= params_.warmup_slots;
  if (counted) {
    ++metrics_.n_total;
    if (collision) ++metrics_.n_collision;
    else ++metrics_.d_success;
  }
  if (sink_) {
    DecisionEvent ev;
    ev.slot = hold.start;
    ev.su = hold.su;
    ev.state = hold.state;
    ev.action = channel;
    ev.prediction = hold.prediction;
    ev.recommended = hold.recommended;
    ev.recommendation = hold.recommendation;
    ev.reward = r;
    ev.collision = collision;
    ev.resolved_at = t_;
    ev.rating = rating;
    ev.counted = counted;
    sink_(ev);
  }

  su_busy_[hold.su] = false;
  if (hold.partner) su_busy_[*hold.partner] = false;
  ledger_.release(channel);
  holds_[channel].reset();
}

void AccessSimulator::resolve_mdp() {
  mdp_->reward = rewards_->means();
  std::optional<Eigen::VectorXd> warm;
  if (mdp_solution_) warm = mdp_solution_->values;
  mdp_solution_ = value_iteration(*mdp_, params_.agent.gamma, params_.vi_tol, warm);
  mdp_dirty_ = false;
}

std::vector<std::size_t> AccessSimulator::collect_requests() {
  std::vector<std::size_t> requests;
  if (params_.request_mode == RequestMode::probability) {
    for (std::size_t su = 0; su < params_.n_su; ++su) {
      const bool wants = request_rng_.bernoulli(params_.request_prob);
      if (wants && !su_busy_[su]) requests.push_back(su);
    }
  } else if (t_ % params_.period == 0) {
    for (std::size_t su = 0; su < params_.n_su; ++su)
      if (!su_busy_[su]) requests.push_back(su);
  }
  return requests;
}

RecommendationList AccessSimulator::recommendation_for(std::size_t su) const {
  const auto scores = params_.use_locations
                          ? channel_scores_located(scores_, su, env_.locations, t_, params_.score_window)
                          : channel_scores(scores_, t_, params_.score_window);
  return recommend(scores, params_.fixed_threshold);
}

std::size_t AccessSimulator::choose(std::uint32_t state, const std::vector<std::size_t>& candidates,
                                    const RecommendationList& list) {
  if (t_ < params_.warmup_slots) return *random_access(candidates, agent_rng_);
  switch (policy_) {
    case AccessPolicy::random:
      return *random_access(candidates, agent_rng_);
    case AccessPolicy::recommendation:
      for (const auto& entry : list.entries)
        if (std::find(candidates.begin(), candidates.end(), entry.channel) != candidates.end())
          return entry.channel;
      return *random_access(candidates, agent_rng_);
    case AccessPolicy::q_learning:
      return *select_action(*q_table_, state, candidates, epsilon_at(t_), agent_rng_);
    case AccessPolicy::mdp: {
      std::vector<double> values(candidates.size());
      for (std::size_t k = 0; k < candidates.size(); ++k)
        values[k] = action_value(*mdp_, mdp_solution_->values, params_.agent.gamma, state, candidates[k]);
      return candidates[argmax_candidate(candidates, values)];
    }
  }
  throw ParameterError("AccessSimulator: unknown policy");
}

void AccessSimulator::grant_requests(const std::vector<SlotState>& sensed, std::uint32_t state) {
  const auto requests = collect_requests();
  const bool counted = t_ >= params_.warmup_slots;
  for (const std::size_t su : arbitrate(requests, arbitration_rng_)) {
    if (su_busy_[su]) continue;  // already engaged as a partner this slot
    if (counted) ++metrics_.n_requests;
    const auto candidates = ledger_.candidates(sensed);
    if (candidates.empty()) {
      if (counted) ++metrics_.n_abandoned;
      continue;
    }
    std::optional<std::size_t> partner;
    if (params_.use_locations) {
      std::vector<std::size_t> available;
      for (const auto j : neighbor_lists_[su])
        if (!su_busy_[j]) available.push_back(j);
      if (available.empty()) {
        if (counted) ++metrics_.n_abandoned;
        continue;
      }
      partner = available[arbitration_rng_.index(available.size())];
    }

    const RecommendationList list = recommendation_for(su);
    const std::size_t channel = choose(state, candidates, list);
    Hold hold;
    hold.su = su;
    hold.partner = partner;
    hold.channel = channel;
    hold.start = t_;
    hold.state = state;
    if (!env_.predicted_next.empty()) hold.prediction = env_.predicted_next[channel][env_.history + t_];
    hold.recommended = list.contains(channel);
    for (const auto& e : list.entries) hold.recommendation.push_back(e.channel);

    ledger_.grant(channel, su);
    su_busy_[su] = true;
    if (partner) su_busy_[*partner] = true;
    holds_[channel] = std::move(hold);
  }
}

}  // namespace specdec
