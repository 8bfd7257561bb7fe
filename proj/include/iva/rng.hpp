#pragma once

#include <cstdint>
#include <random>

namespace iva {

/// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
/// is pinned by the standard) and draws ints/doubles without the
/// implementation-defined std::*_distribution adapters, so results are
/// bit-identical across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(mix(seed)) {}
  /// Independent substream, e.g. one per (seed, trial) pair.
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : gen_(mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased integer in [0, bound), bound >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate);

  bool coin() { return (next_u64() & 1ULL) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z);
  std::mt19937_64 gen_;
};

}  // namespace iva
