// Möbius function: pointwise by trial division, and block values by a
// segmented sieve so ranges near 1e10 stay cheap.
#pragma once

#include <cstdint>
#include <vector>

#include "sqflab/rational.hpp"

namespace sqf {

// Largest n any interval/sieve routine accepts ("desk scale").
inline constexpr i64 kDeskWidth = 400'000'000'000'000LL;  // 4e14

// Hard cap on a single block allocation.
inline constexpr i64 kMaxBlockLen = 1LL << 26;

// Default segment length for internal sieves (cache-sized).
inline constexpr i64 kSegmentLen = 1LL << 20;

// Primes <= n by plain Eratosthenes.
std::vector<i64> primes_upto(i64 n);

// mu(n): 0 if a square divides n, else (-1)^{#prime factors}. n >= 1.
int mobius(i64 n);

// mu(n) != 0.
bool is_squarefree(i64 n);

struct MobiusBlock {
  i64 lo = 0;
  i64 hi = 0;
  std::vector<signed char> values;  // values[n - lo] = mu(n)

  int at(i64 n) const { return values[static_cast<size_t>(n - lo)]; }
};

// mu on [lo, hi], 1 <= lo <= hi, hi - lo < kMaxBlockLen.
// Cost O((hi-lo) loglog hi + sqrt(hi)).
MobiusBlock mobius_block(i64 lo, i64 hi);

// Squarefree flags for [lo, hi] given primes p with p^2 <= hi.
std::vector<char> squarefree_flags(i64 lo, i64 hi, const std::vector<i64>& primes);

}  // namespace sqf
