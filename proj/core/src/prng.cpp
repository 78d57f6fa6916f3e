#include "hypwave/prng.hpp"

#include <cmath>
#include <numbers>

namespace hypwave {

double Prng::normal() {
  // Box-Muller; u is kept away from 0 so the log stays finite.
  double u = uniform01();
  double v = uniform01();
  if (u <= 0.0) u = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

std::uint64_t Prng::shard_seed(std::uint64_t base, std::uint64_t shard) {
  std::uint64_t z = base + (shard + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  return z;
}

}  // namespace hypwave
