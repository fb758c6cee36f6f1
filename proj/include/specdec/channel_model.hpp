#pragma once

// Primary-user channel occupancy and secondary-user placement.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace specdec {

enum class SlotState : std::uint8_t { idle = 0, busy = 1 };

constexpr int to_bit(SlotState s) { return static_cast<int>(s); }
constexpr SlotState from_bit(bool busy) { return busy ? SlotState::busy : SlotState::idle; }

/// ON-OFF law of one primary-user channel, in slots.
struct ChannelParams {
  double mean_interarrival = 10.0;
  double mean_holding = 10.0;
  bool always_idle = false;

  static ChannelParams idle_channel() { return {1.0, 1.0, true}; }

  /// Throws ParameterError unless the means describe a valid process.
  void validate() const;
  /// Steady-state probability that the channel is busy.
  double busy_fraction() const;
};

struct ChannelTrace {
  std::vector<SlotState> states;
  ChannelParams params;
  std::uint64_t seed = 0;

  std::size_t size() const { return states.size(); }
  SlotState operator[](std::size_t t) const { return states[t]; }
};

/// Timing of one slot: a sensing phase followed by a communication phase.
/// Sensing is modelled as instantaneous and error-free at slot start.
struct SlotConfig {
  double t_sense = 1.0;
  double t_comm = 9.0;

  double slot_length() const { return t_sense + t_comm; }
  void validate() const;
};

struct SuLocation {
  double x = 0.0;
  double y = 0.0;
  double comm_radius = 1.0;
};

/// Alternating ON-OFF trace: geometric idle gaps with mean `mean_interarrival`
/// (discrete Poisson arrivals) and geometric busy periods with mean
/// `mean_holding`. Arrivals during a busy period are dropped.
/// The first slot is drawn from the steady-state busy fraction.
ChannelTrace generate_trace(const ChannelParams& params, std::size_t n_slots, std::uint64_t seed);

/// One independent trace per channel; channel i uses mix_seed(seed, i).
std::vector<ChannelTrace> generate_multi(std::span<const ChannelParams> params_list,
                                         std::size_t n_slots, std::uint64_t seed);

/// Uniform placement over [0, arena_side]^2.
std::vector<SuLocation> place_users(std::size_t n, double arena_side, double radius,
                                    std::uint64_t seed);

double distance(const SuLocation& a, const SuLocation& b);

/// Indices j != k within comm_radius of user k (boundary inclusive), ascending.
std::vector<std::size_t> neighbors(std::span<const SuLocation> locs, std::size_t k);

/// CSV with header `slot,channel_0,...,channel_{M-1}`; all traces must share a length.
void write_traces_csv(std::ostream& out, std::span<const ChannelTrace> traces);

}  // namespace specdec
