// G = R x Heisenberg: group operations, Mal'cev coordinates, canonical
// fundamental-domain reduction, the Lipschitz observable, bracket-polynomial
// orbits, star discrepancy, and the obstruction-search dichotomy.
//
// Scalar is generic: dd::Real for numeric scans, Rat for exact pipelines
// (polynomial orbits with rational coefficients reduce exactly).
//
// The observable is the right-Gamma-invariant form
//     F(phi(t1,t2,t3,t4) Gamma) = frac(t1 + t4 + t2 * frac(t3)),
// which on the fundamental domain reads t1 + t4 + t2 t3. reconcile()
// determines empirically which bracket expression this equals along
// poly_orbit; the pinned convention is f3 + f1*frac(-f2).
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sqflab/dd.hpp"
#include "sqflab/rational.hpp"

namespace sqf::nil {

template <class S>
struct GPoint {
  S t{};    // R factor
  S x12{};  // Heisenberg entries (unit upper-triangular)
  S x13{};
  S x23{};
};

template <class S>
struct Malcev {
  S t1{}, t2{}, t3{}, t4{};
};

// phi(t1,t2,t3,t4): x12 = t2, x23 = t3, x13 = t2 t3 + t4.
template <class S>
GPoint<S> from_malcev(const Malcev<S>& c) {
  return {c.t1, c.t2, c.t2 * c.t3 + c.t4, c.t3};
}

// Inverse of from_malcev: t4 = x13 - x12 x23.
template <class S>
Malcev<S> to_malcev(const GPoint<S>& g) {
  return {g.t, g.x12, g.x23, g.x13 - g.x12 * g.x23};
}

// Component product: t adds, Heisenberg parts multiply as matrices.
template <class S>
GPoint<S> gmul(const GPoint<S>& g, const GPoint<S>& h) {
  return {g.t + h.t, g.x12 + h.x12, g.x13 + h.x13 + g.x12 * h.x23, g.x23 + h.x23};
}

template <class S>
struct Reduced {
  Malcev<S> c;        // coordinates in [0,1)^4
  GPoint<S> gamma;    // integer entries; g = phi(c) * gamma
};

// Canonical reduction: t2 and t3 first (integer right multiplications),
// then t4, then t1. The coordinates depend only on the coset g Gamma.
template <class S>
Reduced<S> reduce(const GPoint<S>& g);

// frac(t1 + t4 + t2 * frac(t3)); Lipschitz away from the t3 wrap.
template <class S>
S lip_value(const Malcev<S>& c);

// Degree <= 3 polynomials (c0 + c1 n + c2 n^2 + c3 n^3), exact coefficients.
struct Poly3 {
  std::array<Rat, 4> c{Rat(0), Rat(0), Rat(0), Rat(0)};

  Rat eval(i64 n) const;
  dd::Real eval_dd(i64 n) const;
  const Rat& linear() const { return c[1]; }  // the alpha_i of the dichotomy
};

struct BracketSeq {
  Poly3 f1, f2, f3;
};

// g(n) = phi(f3(n), f1(n), -f2(n), 0).
template <class S>
GPoint<S> poly_orbit(const BracketSeq& seq, i64 n);

// frac(f3(n) + f1(n) * frac(f2(n))), the dichotomy's target expression.
dd::Real bracket_value(const BracketSeq& seq, i64 n);
Rat bracket_value_exact(const BracketSeq& seq, i64 n);

// The four candidate conventions for what F(orbit) equals.
enum class BracketConvention { plus_frac, plus_floor, minus_frac, minus_floor };
std::string convention_name(BracketConvention c);

struct ReconcileReport {
  std::array<double, 4> max_distance{};  // circle distance per convention
  int reconciled = -1;                   // index with max < 1e-9; -1 if none
  bool all_coincide = false;             // degenerate seqs (e.g. f2 == 0)
};

// Exact-rational comparison of F(reduce(poly_orbit(n))) against each
// convention for n <= N.
ReconcileReport reconcile(const BracketSeq& seq, i64 N);

// Exact star discrepancy D*_N by the sorted-sample formula.
double star_discrepancy(std::vector<double> values);

struct EquiResult {
  bool equidistributed = false;
  double d_star = 1.0;
};

EquiResult equi_test(const BracketSeq& seq, i64 N, double delta);

struct HorizontalChar {
  i64 q1 = 0, q2 = 0, q3 = 0;
  double dist = 0.0;
};

// All canonical-sign triples 0 < max|q_i| <= Q with
// ||q1 a1 + q2 a2 + q3 a3|| <= eps/N, sorted by (max|q|, dist). Exact
// integer arithmetic when the common denominator is small enough.
std::vector<HorizontalChar> obstruction_search(const std::array<Rat, 3>& alphas, i64 N, i64 Q,
                                               double eps, size_t max_hits = 4096);

struct DichotomyTrial {
  std::string arm;  // "planted" | "control"
  int index = 0;
  i64 planted_q = 0;
  double d_star = 0.0;
  bool equidistributed = false;
  bool obstruction_found = false;
  bool plant_recovered = false;  // some hit has all components = 0 mod q
  HorizontalChar best;
  bool flagged = false;  // failed with no obstruction at all
  std::array<std::string, 3> alphas;
};

struct DichotomyReport {
  i64 N = 0;
  double delta = 0.0;
  i64 Q = 0;
  double eps = 0.0;
  u64 seed = 0;
  int planted_failures = 0;       // planted trials that failed equi (want all)
  int planted_recovered = 0;      // ... with a plant-explaining obstruction
  int control_equidistributed = 0;
  int control_failures = 0;
  int flags = 0;
  std::vector<DichotomyTrial> trials;
};

// trials per arm; deterministic under seed.
DichotomyReport dichotomy_experiment(int trials, i64 N, double delta, i64 Q, double eps, u64 seed,
                                     int threads = 1);

// A smooth curve handle: value and derivatives 0..4 at a point, with the
// scale metadata (T, N) and a bound on |g^{(deg+1)}| over the window.
struct SmoothCurve {
  std::function<double(double x, int order)> deriv;
  double T = 1.0;
  double N = 1.0;
  double next_deriv_bound = 0.0;
};

struct LocalBracket {
  BracketSeq seq;           // degrees 1, 2, 3 in the window offset h
  double remainder = 0.0;   // certified Taylor remainder over the window
};

// Taylor-localize (g1, g2, g3) at n0 over |h| <= window; checks the
// derivative scaling g_i^{(j)} ~ T_i/N^j and window <= N^kappa.
LocalBracket local_bracket(const SmoothCurve& g1, const SmoothCurve& g2, const SmoothCurve& g3,
                           i64 n0, i64 window, double kappa);

}  // namespace sqf::nil
