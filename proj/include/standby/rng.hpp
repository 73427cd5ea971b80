#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace standby {

/// Deterministic random source. Every draw is a pure function of the seed,
/// so batches replay bit-exactly regardless of how work is scheduled.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in the open interval (0, 1); never returns 0 or 1,
  /// so log() of it is always finite.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal via Box-Muller (no caching: one draw consumes two
  /// uniforms, keeping the stream layout simple).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Splittable child seed for replication `index` of a batch keyed by
  /// `seed`. SplitMix64 finalizer over the combined key.
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace standby
