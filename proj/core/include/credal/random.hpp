#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace credal {

// Seeded generator with fully specified derived draws. The std::*_distribution
// templates are implementation-defined, so uniform reals and bounded integers
// are computed here from raw 64-bit output to keep results identical across
// standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // Uniform integer in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  // Standard exponential variate.
  double exponential() { return -std::log1p(-uniform01()); }

  bool coin() { return (next() >> 63) != 0; }

  // Independent stream derived from (seed, stream), e.g. one per ensemble
  // instance, so results do not depend on scheduling.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ULL)));
  }

  // splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return UINT64_MAX; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace credal
