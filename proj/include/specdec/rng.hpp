#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace specdec {

/// Derives an independent sub-seed from a master seed and a stream index.
///
/// splitmix64 finalizer applied to `master + (stream + 1) * 0x9E3779B97F4A7C15`.
/// Streams never depend on one another, so adding channels or components
/// leaves every existing stream untouched.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source with platform-independent draws.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// derives every variate from raw 64-bit words, never through the
/// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n); n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Geometric variate on {1, 2, ...} with the given mean (success probability
  /// min(1, 1/mean)), sampled by inversion.
  std::uint64_t geometric(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace specdec
