// Lattice points near curves: brute counts of ||phi(n)|| <= delta with an
// exactness guard, the three elementary bound evaluators, the
// Filaseta-Trifonov sixth bound, and a seeded validation harness.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqflab/dd.hpp"
#include "sqflab/rational.hpp"

namespace sqf::curves {

inline constexpr i64 kScanLimit = 100'000'000;  // max |I| for count_near

struct CurveQuery {
  std::function<dd::Real(i64)> phi;            // evaluated in double-double
  std::function<Rat(i64)> phi_exact;           // optional exact path
  i64 lo = 0;
  i64 hi = -1;  // inclusive; empty when hi < lo
  double delta = 0.0;
};

// #{n in [lo, hi] : ||phi(n)|| <= delta}. Near-boundary decisions (margin
// below ~10 ulp) are re-decided exactly when phi_exact is present.
i64 count_near(const CurveQuery& query);

// Lemma-style bound evaluators (values, not theorems).
double bound_frac(double L, double V, double delta);                 // (L+1)(1 + delta/V)
double bound_stat(double N, double T, double delta, bool* hypothesis_ok = nullptr);
double bound_poisson(double N, double T, double delta);              // N d + sqrt(T/d) + N/sqrt(T/d)

struct Ft6Bound {
  double value = 0.0;
  bool hypothesis_ok = false;
};

// T^{2/(r(r+1))} N^{(r-1)/(r+1)} + N delta^{2/((r-1)(r-2))}
//   + N (delta T N^{1-r})^{1/(r^2-3r+4)},  r >= 3.
// hypothesis: delta <= c_r min{T N^{-r+2}, T^{(r-4)/(r-2)} N^{-r+3} + T N^{-r+1}}.
Ft6Bound bound_ft6(double N, double T, double delta, int r, double c_r);

struct BoundReport {
  std::string family;
  u64 seed = 0;
  i64 brute = 0;
  double bound = 0.0;
  double ratio = 0.0;  // brute / max(bound, 1)
  bool hypothesis_ok = true;
};

struct FamilyInstance {
  CurveQuery query;
  double bound = 0.0;
  bool hypothesis_ok = true;
};

struct CurveFamily {
  std::string name;
  std::function<FamilyInstance(u64 seed)> generate;
};

// Deterministic under (family, trials, seed); per-trial seeds are split
// from the master seed.
std::vector<BoundReport> validate_family(const CurveFamily& family, int trials, u64 seed,
                                         int threads = 1);

// The families used by the CLI and the acceptance suite.
CurveFamily family_linear(double L_max);                      // Lemma "frac" bound
CurveFamily family_two_monomial();                            // Lemma "stat" bound
CurveFamily family_stat_witness(double T, double delta);      // phi(n) = T((n-N)/N)^2
CurveFamily family_poisson_quadratic();                       // phi = T (n/N)^2 on [N/2, 5N/2]
CurveFamily family_inverse_square(double c_r);                // f(n) = X/n^2, r = 4

}  // namespace sqf::curves
