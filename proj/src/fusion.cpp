#include "specdec/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "specdec/errors.hpp"

namespace specdec {

std::uint32_t encode_bits(std::span<const SlotState> bits) {
  if (bits.size() > 31) throw ParameterError("encode_bits: more than 31 bits");
  std::uint32_t value = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] == SlotState::busy) value |= std::uint32_t{1} << i;
  return value;
}

std::vector<SlotState> decode_bits(std::uint32_t value, std::size_t width) {
  if (width > 31) throw ParameterError("decode_bits: more than 31 bits");
  std::vector<SlotState> bits(width);
  for (std::size_t i = 0; i < width; ++i) bits[i] = from_bit((value >> i) & 1U);
  return bits;
}

std::uint32_t encode_state(std::span<const SlotState> local_predictions) {
  if (local_predictions.empty() || local_predictions.size() > kMaxFusionUsers)
    throw ParameterError("encode_state: need 1..20 local predictions");
  return encode_bits(local_predictions);
}

void FusionParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("FusionParams: alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("FusionParams: gamma must be in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("FusionParams: epsilon must be in [0, 1]");
  if (!std::isfinite(reward_hit) || !std::isfinite(reward_miss))
    throw ParameterError("FusionParams: rewards must be finite");
}

FusionQTable::FusionQTable(std::size_t n_users, FusionParams params)
    : n_users_(n_users), params_(params) {
  if (n_users < 1 || n_users > kMaxFusionUsers)
    throw ParameterError("FusionQTable: need 1..20 users");
  params_.validate();
  values_.assign(std::size_t{1} << n_users, {0.0, 0.0});
}

void FusionQTable::set_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("FusionQTable: epsilon must be in [0, 1]");
  params_.epsilon = epsilon;
}

void FusionQTable::check_state(std::uint32_t state) const {
  if (state >= values_.size())
    throw ParameterError("FusionQTable: state " + std::to_string(state) + " out of range");
}

double FusionQTable::q(std::uint32_t state, SlotState action) const {
  check_state(state);
  return values_[state][static_cast<std::size_t>(to_bit(action))];
}

void FusionQTable::set_q(std::uint32_t state, SlotState action, double value) {
  check_state(state);
  values_[state][static_cast<std::size_t>(to_bit(action))] = value;
}

SlotState FusionQTable::greedy(std::uint32_t state) const {
  check_state(state);
  return from_bit(values_[state][1] > values_[state][0]);
}

SlotState FusionQTable::step(std::uint32_t state, std::uint32_t next_state, SlotState actual, Rng& rng) {
  check_state(state);
  check_state(next_state);
  SlotState action = greedy(state);
  if (params_.epsilon > 0.0 && rng.bernoulli(params_.epsilon)) action = from_bit(rng.index(2) == 1);

  const double r = action == actual ? params_.reward_hit : params_.reward_miss;
  const auto& next = values_[next_state];
  double& q = values_[state][static_cast<std::size_t>(to_bit(action))];
  q += params_.alpha * (r + params_.gamma * std::max(next[0], next[1]) - q);
  return action;
}

void FusionQTable::write_csv(std::ostream& out) const {
  out << "state,q_idle,q_busy\n";
  const auto precision = out.precision(17);
  for (std::size_t s = 0; s < values_.size(); ++s)
    out << s << ',' << values_[s][0] << ',' << values_[s][1] << '\n';
  out.precision(precision);
}

SlotState m_out_of_n(std::span<const SlotState> local_predictions, std::size_t m) {
  if (m < 1 || m > local_predictions.size())
    throw ParameterError("m_out_of_n: M must lie in [1, N]");
  const auto busy = std::count(local_predictions.begin(), local_predictions.end(), SlotState::busy);
  return from_bit(static_cast<std::size_t>(busy) >= m);
}

SlotState soft_fuse(std::span<const double> p_idle, std::span<const double> p_busy) {
  if (p_idle.size() != p_busy.size() || p_idle.empty())
    throw ParameterError("soft_fuse: probability vectors must be non-empty and equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < p_idle.size(); ++i) {
    const double denom = p_idle[i] + p_busy[i];
    if (!(denom > 0.0)) throw ParameterError("soft_fuse: zero probability mass for user " + std::to_string(i));
    sum += (p_idle[i] - p_busy[i]) / denom;
  }
  return from_bit(!(sum >= 0.0));
}

}  // namespace specdec
