// Squarefree counting in short intervals, the Möbius-square decomposition,
// square-divisor sets D_{[D,2D]}, and gap scans.
//
// The interval [X, X+H] is inclusive on both ends; membership tests are
// exact integer floor/ceil conditions, never floating point.
#pragma once

#include <map>
#include <vector>

#include "sqflab/mobius.hpp"
#include "sqflab/rational.hpp"

namespace sqf {

struct Interval {
  i64 X = 1;  // left endpoint, >= 1
  i64 H = 0;  // length; the interval is [X, X+H]
};

// The parameter bundle (X, H, U, D, A, W) with its derived scales.
//   G = X/H^5, Delta = D/H, R = X A^3/(Delta^4 H^4),
//   B = (Delta^2/G)(Delta/A)^3, F = G H^2 A / Delta^3.
struct ScaleContext {
  i64 X = 0;
  i64 H = 0;
  double U = 1.0;
  i64 D = 1;
  double A = 1.0;
  double W = 1.0;

  double G = 0.0;
  double Delta = 0.0;
  double R = 0.0;
  double B = 0.0;
  double F = 0.0;

  static ScaleContext make(i64 X, i64 H, double U, i64 D, double A, double W);
};

struct DSet {
  ScaleContext ctx;
  std::vector<i64> members;  // sorted, d in [D, 2D]
};

// d_set plus the exact symmetric difference against the fractional-part
// membership test ||X/d^2|| <= H/D^2.
struct FracDSet {
  DSet set;
  std::vector<i64> symmetric_difference;
};

struct DecompositionReport {
  Interval interval;
  i64 D_minus = 1;
  i64 D_plus = 1;
  Rat main_term;        // (6/pi^2 approximant) * H
  i64 mobius_sum = 0;   // sum_{d <= D_plus} mu(d) #{n in I : d^2 | n}
  i64 exact_count = 0;  // sieve count of squarefree n in I
  std::map<i64, i64> per_scale_counts;  // dyadic D -> #D_{[D,2D]}
  Rat residual;         // mobius_sum - main_term
};

struct GapRecord {
  i64 q = 0;    // left endpoint of the record gap
  i64 gap = 0;  // q' - q for the next squarefree q'
};

struct GapReport {
  i64 limit = 0;
  std::vector<GapRecord> records;  // strictly increasing in both coordinates
  i64 max_gap = 0;
};

// 6/pi^2 as a fixed rational approximant, |error| < 1e-40.
const Rat& six_over_pi_sq();

// #{n in [X, X+H] : n squarefree}, segmented sieve of prime squares.
i64 count_squarefree(const Interval& iv);

// Per-integer oracle (independent trial-division path, for tests/acceptance).
i64 count_squarefree_bruteforce(const Interval& iv);

DecompositionReport mobius_decomposition(const Interval& iv, i64 D_minus, i64 D_plus);

// D_{[D,2D]} = {d : exists m with m d^2 in [X, X+H]}, exact floor/ceil test.
DSet d_set(const ScaleContext& ctx);

FracDSet frac_d_set(const ScaleContext& ctx);

// Record gaps between consecutive squarefree numbers up to N; streaming.
GapReport gap_scan(i64 N);

// gap / q^theta for each record gap.
std::vector<double> theta_star_ratios(const GapReport& report, double theta);

}  // namespace sqf
