#include "specdec/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

namespace specdec {

void ChannelParams::validate() const {
  if (always_idle) return;
  if (!(mean_interarrival > 0.0) || !std::isfinite(mean_interarrival))
    throw ParameterError("ChannelParams: mean_interarrival must be positive");
  if (!(mean_holding >= 1.0) || !std::isfinite(mean_holding))
    throw ParameterError("ChannelParams: mean_holding must be at least one slot");
}

double ChannelParams::busy_fraction() const {
  if (always_idle) return 0.0;
  const double gap = std::max(1.0, mean_interarrival);
  return mean_holding / (mean_holding + gap);
}

void SlotConfig::validate() const {
  if (!(t_sense > 0.0) || !(t_comm > 0.0))
    throw ParameterError("SlotConfig: phase lengths must be positive");
}

ChannelTrace generate_trace(const ChannelParams& params, std::size_t n_slots, std::uint64_t seed) {
  params.validate();
  ChannelTrace trace{std::vector<SlotState>(n_slots, SlotState::idle), params, seed};
  if (params.always_idle || n_slots == 0) return trace;

  Rng rng(seed);
  bool busy = rng.bernoulli(params.busy_fraction());
  std::size_t t = 0;
  while (t < n_slots) {
    // Geometric laws are memoryless, so the first run needs no residual-life correction.
    const std::uint64_t run = rng.geometric(busy ? params.mean_holding : params.mean_interarrival);
    const std::size_t end = run >= n_slots - t ? n_slots : t + static_cast<std::size_t>(run);
    if (busy) {
      for (; t < end; ++t) trace.states[t] = SlotState::busy;
    } else {
      t = end;
    }
    busy = !busy;
  }
  return trace;
}

std::vector<ChannelTrace> generate_multi(std::span<const ChannelParams> params_list,
                                         std::size_t n_slots, std::uint64_t seed) {
  if (params_list.empty()) throw ParameterError("generate_multi: empty channel list");
  std::vector<ChannelTrace> traces;
  traces.reserve(params_list.size());
  for (std::size_t i = 0; i < params_list.size(); ++i)
    traces.push_back(generate_trace(params_list[i], n_slots, mix_seed(seed, i)));
  return traces;
}

std::vector<SuLocation> place_users(std::size_t n, double arena_side, double radius,
                                    std::uint64_t seed) {
  if (!(arena_side > 0.0)) throw ParameterError("place_users: arena_side must be positive");
  if (!(radius > 0.0)) throw ParameterError("place_users: radius must be positive");
  Rng rng(seed);
  std::vector<SuLocation> locs(n);
  for (auto& loc : locs) {
    loc.x = rng.uniform() * arena_side;
    loc.y = rng.uniform() * arena_side;
    loc.comm_radius = radius;
  }
  return locs;
}

double distance(const SuLocation& a, const SuLocation& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<std::size_t> neighbors(std::span<const SuLocation> locs, std::size_t k) {
  if (k >= locs.size()) throw ParameterError("neighbors: index out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < locs.size(); ++j) {
    if (j != k && distance(locs[j], locs[k]) <= locs[k].comm_radius) out.push_back(j);
  }
  return out;
}

void write_traces_csv(std::ostream& out, std::span<const ChannelTrace> traces) {
  const std::size_t n = traces.empty() ? 0 : traces.front().size();
  for (const auto& tr : traces)
    if (tr.size() != n) throw ParameterError("write_traces_csv: traces differ in length");
  out << "slot";
  for (std::size_t c = 0; c < traces.size(); ++c) out << ",channel_" << c;
  out << '\n';
  for (std::size_t t = 0; t < n; ++t) {
    out << t;
    for (const auto& tr : traces) out << ',' << to_bit(tr[t]);
    out << '\n';
  }
}

}  // namespace specdec
