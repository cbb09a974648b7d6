#pragma once

#include <cstdint>
#include <random>

namespace laborsim {

// 64-bit finalizer (splitmix64 style). Stable across platforms; used to
// derive independent sub-stream seeds for sweep cells and trials.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for (base seed, stream domain, cell, trial). Distinct tuples give
// uncorrelated seeds, so parallel sweep cells reproduce the serial run.
inline constexpr std::uint64_t derive_seed(std::uint64_t base,
                                           std::uint64_t domain,
                                           std::uint64_t cell = 0,
                                           std::uint64_t trial = 0) noexcept {
  std::uint64_t x = mix64(base ^ mix64(domain));
  x = mix64(x ^ mix64(cell));
  return mix64(x ^ mix64(trial));
}

// Stream domains for seed derivation, one per consumer.
inline constexpr std::uint64_t kSimulateDomain = 1;
inline constexpr std::uint64_t kBeveridgeDomain = 2;
inline constexpr std::uint64_t kGammaSweepDomain = 3;
inline constexpr std::uint64_t kCoupledDomain = 4;

// Deterministic RNG. The engine is std::mt19937_64 (exactly specified by
// the standard); draws are hand-rolled because std::uniform_*_distribution
// is implementation-defined and would break run-to-run reproducibility
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), unbiased bitmask rejection. bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = engine_() & mask;
      if (v < bound) return v;
    }
  }

  // True with probability p; p <= 0 never, p >= 1 always.
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace laborsim
