#include "specdec/rng.hpp"

#include <cmath>
#include <limits>

#include "specdec/errors.hpp"

namespace specdec {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ParameterError("Rng::index: empty range");
  const auto range = static_cast<std::uint64_t>(n);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

std::uint64_t Rng::geometric(double mean) {
  if (!(mean > 0.0)) throw ParameterError("Rng::geometric: mean must be positive");
  const double p = mean <= 1.0 ? 1.0 : 1.0 / mean;
  if (p >= 1.0) {
    engine_();  // keep stream consumption independent of the mean
    return 1;
  }
  const double u = 1.0 - uniform();  // (0, 1]
  const double k = std::floor(std::log(u) / std::log1p(-p));
  return static_cast<std::uint64_t>(k) + 1;
}

}  // namespace specdec
