// Exact arbitrary-precision integers and rationals (GMP-backed) plus the
// nearest-integer helpers everything else is built on.
//
// Invariants: every Rat is kept canonical (den > 0, gcd(|num|, den) = 1);
// gmpxx arithmetic preserves this, explicit constructions go through
// make_rat(). No floating point in this layer.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqf {

using Int = mpz_class;
using Rat = mpq_class;
using i64 = long long;
using u64 = unsigned long long;
using i128 = __int128;

inline Int to_int(i64 v) {
  // mpz has no long long ctor on all ABIs; LP64 long is wide enough here.
  return Int(static_cast<long>(v));
}

inline Rat make_rat(Int num, Int den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  Rat r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

inline Rat make_rat(i64 num, i64 den) { return make_rat(to_int(num), to_int(den)); }

inline Rat to_rat(i64 v) { return Rat(to_int(v)); }

// Exact: doubles are dyadic rationals.
inline Rat rat_from_double(double x) { return Rat(x); }

inline Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

// x - floor(x), in [0, 1).
inline Rat frac_rat(const Rat& x) { return x - Rat(floor_rat(x)); }

// ||x|| = min_n |x - n|, the paper's distance to the nearest integer.
// Exact; result in [0, 1/2].
inline Rat dist_to_z(const Rat& x) {
  Rat f = frac_rat(x);
  Rat g = 1 - f;
  return f <= g ? f : g;
}

// Nearest integer, exact half-integers rounded to even.
inline Int nearest_int(const Rat& x) {
  Int f = floor_rat(x);
  Rat r = x - Rat(f);
  Rat half = make_rat(1, 2);
  if (r < half) return f;
  if (r > half) return f + 1;
  return mpz_even_p(f.get_mpz_t()) ? f : f + 1;
}

// True iff x is exactly half-integral (the nearest-integer tie case).
inline bool is_half_integer_tie(const Rat& x) { return frac_rat(x) == make_rat(1, 2); }

inline double to_double(const Rat& x) { return x.get_d(); }

inline std::string rat_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline i64 int_to_i64(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("int_to_i64: value exceeds 64 bits");
  return static_cast<i64>(v.get_si());
}

// Floor/ceil division for positive 128-bit operands.
inline i128 floor_div_pos(i128 a, i128 b) { return a / b; }
inline i128 ceil_div_pos(i128 a, i128 b) { return (a + b - 1) / b; }

}  // namespace sqf
