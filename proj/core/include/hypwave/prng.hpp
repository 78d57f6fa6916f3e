#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hypwave {

/// Deterministic pseudo-random source used throughout the toolkit.
///
/// All variate conversions are done by hand on top of the raw 64-bit stream,
/// because the std:: distribution objects are implementation-defined and would
/// break bit-for-bit reproducibility across standard libraries.  The engine
/// and conversion scheme are named by kName so every output file can record
/// exactly which generator produced it.
class Prng {
 public:
  static constexpr const char* kName = "mt19937_64/u53";

  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits (dyadic, exactly representable).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via the Box-Muller map; consumes exactly two uniforms
  /// per call so the stream position is call-count deterministic.
  double normal();

  /// Derives an independent stream seed for a worker shard.  Uses the
  /// splitmix64 finalizer so neighbouring shard indices decorrelate.
  static std::uint64_t shard_seed(std::uint64_t base, std::uint64_t shard);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypwave
