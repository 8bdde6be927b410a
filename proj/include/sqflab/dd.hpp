// Compact double-double arithmetic (~106-bit mantissa).
//
// Orbit values reach ~1e18 before their fractional part is taken; plain
// doubles keep no fractional information at that size, so the nilmanifold
// and inversion code paths run on dd. Algorithms are the standard
// error-free transforms (Dekker/Knuth), products via std::fma.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>

namespace sqf::dd {

struct Real {
  double hi = 0.0;
  double lo = 0.0;

  Real() = default;
  Real(double h) : hi(h), lo(0.0) {}
  Real(double h, double l) : hi(h), lo(l) {}
};

inline Real quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline Real two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Real two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline Real operator+(Real a, Real b) {
  Real s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline Real operator-(Real a) { return {-a.hi, -a.lo}; }
inline Real operator-(Real a, Real b) { return a + (-b); }

inline Real operator*(Real a, Real b) {
  Real p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}

inline Real operator/(Real a, Real b) {
  double q1 = a.hi / b.hi;
  Real r = a - b * Real(q1);
  double q2 = r.hi / b.hi;
  r = r - b * Real(q2);
  double q3 = r.hi / b.hi;
  Real q = quick_two_sum(q1, q2);
  return q + Real(q3);
}

inline Real& operator+=(Real& a, Real b) { return a = a + b; }
inline Real& operator-=(Real& a, Real b) { return a = a - b; }
inline Real& operator*=(Real& a, Real b) { return a = a * b; }

inline bool operator<(Real a, Real b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(Real a, Real b) { return b < a; }
inline bool operator<=(Real a, Real b) { return !(b < a); }
inline bool operator>=(Real a, Real b) { return !(a < b); }
inline bool operator==(Real a, Real b) { return a.hi == b.hi && a.lo == b.lo; }

inline double to_double(Real a) { return a.hi + a.lo; }

inline Real dd_abs(Real a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }

inline Real dd_floor(Real a) {
  double fh = std::floor(a.hi);
  if (fh != a.hi) return {fh, 0.0};
  // hi already integral: the fractional information lives in lo.
  double fl = std::floor(a.lo);
  return quick_two_sum(fh, fl);
}

// a - floor(a), in [0, 1).
inline Real dd_frac(Real a) {
  Real f = a - dd_floor(a);
  if (f.hi < 0.0) f = f + Real(1.0);
  if (f.hi >= 1.0) f = f - Real(1.0);
  return f;
}

// min(frac, 1 - frac): distance to the nearest integer.
inline Real dd_dist_to_z(Real a) {
  Real f = dd_frac(a);
  Real g = Real(1.0) - f;
  return f <= g ? f : g;
}

inline Real from_i64(long long v) {
  double h = static_cast<double>(v);
  double l = static_cast<double>(v - static_cast<long long>(h));
  return {h, l};
}

inline Real from_rat(const mpq_class& q) {
  double h = q.get_d();
  mpq_class rem = q - mpq_class(h);
  return quick_two_sum(h, rem.get_d());
}

}  // namespace sqf::dd
