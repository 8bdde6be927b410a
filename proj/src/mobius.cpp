#include "sqflab/mobius.hpp"

#include <cmath>
#include <stdexcept>

namespace sqf {

std::vector<i64> primes_upto(i64 n) {
  std::vector<i64> primes;
  if (n < 2) return primes;
  std::vector<char> comp(static_cast<size_t>(n) + 1, 0);
  for (i64 p = 2; p <= n; ++p) {
    if (comp[static_cast<size_t>(p)]) continue;
    primes.push_back(p);
    for (i64 m = p * p; m <= n; m += p) comp[static_cast<size_t>(m)] = 1;
  }
  return primes;
}

int mobius(i64 n) {
  if (n <= 0) throw std::domain_error("mobius: n must be positive");
  int factors = 0;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    ++factors;
  }
  if (n > 1) ++factors;
  return (factors & 1) ? -1 : 1;
}

bool is_squarefree(i64 n) { return mobius(n) != 0; }

static i64 isqrt64(i64 n) {
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

MobiusBlock mobius_block(i64 lo, i64 hi) {
  if (lo < 1 || hi < lo) throw std::domain_error("mobius_block: need 1 <= lo <= hi");
  if (hi - lo + 1 > kMaxBlockLen) throw std::domain_error("mobius_block: range exceeds block cap");
  if (hi > kDeskWidth) throw std::overflow_error("mobius_block: beyond desk-scale width");

  size_t len = static_cast<size_t>(hi - lo + 1);
  MobiusBlock block{lo, hi, std::vector<signed char>(len, 1)};
  std::vector<i64> remaining(len);
  for (size_t i = 0; i < len; ++i) remaining[i] = lo + static_cast<i64>(i);

  for (i64 p : primes_upto(isqrt64(hi))) {
    i64 first = ((lo + p - 1) / p) * p;
    for (i64 m = first; m <= hi; m += p) {
      size_t i = static_cast<size_t>(m - lo);
      block.values[i] = static_cast<signed char>(-block.values[i]);
      remaining[i] /= p;
    }
    i64 p2 = p * p;
    if (p2 > hi) continue;
    i64 first2 = ((lo + p2 - 1) / p2) * p2;
    for (i64 m = first2; m <= hi; m += p2) block.values[static_cast<size_t>(m - lo)] = 0;
  }
  // A leftover cofactor is a single prime > sqrt(hi).
  for (size_t i = 0; i < len; ++i)
    if (remaining[i] > 1) block.values[i] = static_cast<signed char>(-block.values[i]);
  return block;
}

std::vector<char> squarefree_flags(i64 lo, i64 hi, const std::vector<i64>& primes) {
  std::vector<char> flags(static_cast<size_t>(hi - lo + 1), 1);
  for (i64 p : primes) {
    i64 p2 = p * p;
    if (p2 > hi) break;
    i64 first = ((lo + p2 - 1) / p2) * p2;
    for (i64 m = first; m <= hi; m += p2) flags[static_cast<size_t>(m - lo)] = 0;
  }
  return flags;
}

}  // namespace sqf
