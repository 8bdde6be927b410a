// Deterministic, splittable randomness for experiments.
//
// Reports must be byte-identical across platforms and thread counts, so we
// avoid std distributions (unspecified algorithms) and derive everything from
// splitmix64. Per-task seeds come from hashing (master_seed, task_index),
// which is the documented splitting scheme.
#pragma once

#include <cstdint>

namespace sqf {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits (an exact dyadic rational).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased uniform in [0, bound)  (rejection sampling).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t limit = ~0ULL - (~0ULL % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x > limit);
    return x % bound;
  }

  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

// Seed for task `index` of a run with master seed `seed`.
inline std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 s(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  s.next();
  return s.next();
}

}  // namespace sqf
