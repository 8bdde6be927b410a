// Differencing identities over exact rationals, their Taylor-envelope
// audits, the approximate parametrization d -> r*(d), defect records, and
// the boosted inverse approximation g_j.
//
// Closed forms used throughout (algebra, exact):
//   basic_diff:  F_a(d) = X/d^2 - X/(d+a)^2        = X a (2d+a) / (d^2 (d+a)^2)
//   roth_diff:   R_a(d) = -(2d-a)X/d^2 + (2d+3a)X/(d+a)^2 = X a^3 / (d^2 (d+a)^2)
// Both are strictly decreasing in d for X, a > 0, which keeps the numeric
// inversions well-conditioned (no cancellation).
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sqflab/dd.hpp"
#include "sqflab/intervals.hpp"
#include "sqflab/rational.hpp"

namespace sqf::diff {

Rat basic_diff(const Rat& X, const Rat& d, const Rat& a);
Rat roth_diff(const Rat& X, const Rat& d, const Rat& a);
Rat quad_diff(const Rat& X, const Rat& d, const Rat& a, const Rat& b);
Rat quad_diff_mod(const Rat& X, const Rat& d, const Rat& a, const Rat& b);
Rat double_diff(const Rat& X, const Rat& d, const Rat& a, const Rat& b);

inline Rat basic_diff(i64 X, i64 d, i64 a) { return basic_diff(to_rat(X), to_rat(d), to_rat(a)); }
inline Rat roth_diff(i64 X, i64 d, i64 a) { return roth_diff(to_rat(X), to_rat(d), to_rat(a)); }
inline Rat quad_diff(i64 X, i64 d, i64 a, i64 b) {
  return quad_diff(to_rat(X), to_rat(d), to_rat(a), to_rat(b));
}
inline Rat quad_diff_mod(i64 X, i64 d, i64 a, i64 b) {
  return quad_diff_mod(to_rat(X), to_rat(d), to_rat(a), to_rat(b));
}
inline Rat double_diff(i64 X, i64 d, i64 a, i64 b) {
  return double_diff(to_rat(X), to_rat(d), to_rat(a), to_rat(b));
}

enum class ExpansionKind { std_diff, roth, quad, quad_mod, second_diff };

// exact - truncation, where the truncation is the displayed expansion head
// (sign-corrected where the printed source slips; see tests) and the
// envelope is the next-order monomial the residual must be dominated by.
struct TaylorResidual {
  Rat exact;
  Rat truncation;
  Rat residual;
  Rat envelope;
  double ratio = 0.0;  // |residual| / envelope, 0 when envelope vanishes
};

TaylorResidual taylor_residual(ExpansionKind kind, i64 X, i64 d, i64 a, i64 b = 0);

// How D_a reads "{d, d+a} cap D = {}": consecutive members at gap a
// (the reading that makes the pigeonhole decomposition work), or the
// literal both-endpoints test.
enum class PairRule { consecutive, both_members };

struct PairFamily {
  ScaleContext ctx;
  i64 a = 1;
  PairRule rule = PairRule::consecutive;
  std::vector<i64> members;
};

PairFamily pair_family(const DSet& dset, i64 a, PairRule rule = PairRule::consecutive);

// Exact membership-implied near-integer inequalities:
//   ||F_a(d)|| <= H/d^2 + H/(d+a)^2
//   ||R_a(d)|| <= (2d-a)H/d^2 + (2d+3a)H/(d+a)^2
struct NearIntegerAudit {
  i64 checked = 0;
  i64 violations = 0;
  Rat min_slack_basic;  // min over d of (bound - dist), >= 0 iff no violation
  Rat min_slack_roth;
};

NearIntegerAudit near_integer_audit(const PairFamily& family);

struct SpacingAudit {
  i64 min_spacing = 0;
  double threshold = 0.0;  // a^{-1/3} Delta^{5/3} (H^5/X)^{1/3}
  double lemma_ratio = 0.0;
};

SpacingAudit spacing_audit(const PairFamily& family);

struct ParamData {
  ScaleContext ctx;
  i64 a = 1;
  std::map<i64, i64> r_star;                 // d -> nearest integer to R_a(d)
  std::vector<i64> r_set;                    // sorted distinct r values
  std::map<i64, std::vector<i64>> fibers;    // r -> all d with r*(d) = r
  std::map<i64, i64> d_star;                 // r -> smallest d in the fiber
  std::map<i64, double> tilde;               // r -> numeric R_a^{-1}(r)
  i64 ties = 0;                              // exact half-integer R_a(d) seen
  size_t max_fiber = 0;
  double fiber_bound_const = 0.0;  // (max_fiber-1) / ((Delta/A)^{8/3}(H^5/X)^{2/3})
};

ParamData roth_param(const PairFamily& family);

// R_a and F_a as real functions of a real argument (for inversion).
double roth_eval(i64 X, i64 a, double t);
double basic_eval(i64 X, i64 a, double t);
dd::Real roth_eval_dd(i64 X, i64 a, dd::Real t);
dd::Real basic_eval_dd(i64 X, i64 a, dd::Real t);
dd::Real basic_deriv_dd(i64 X, i64 a, dd::Real t);

// tilde_d: invert R_a on [lo, hi] (monotone, verified); bisection plus a
// safeguarded Newton polish; |R_a(t) - rho| <= 1e-12 |rho|.
double invert_roth(i64 X, i64 a, double rho, double lo, double hi);

// F_a^{-1} in double-double (the section-5 envelopes are << 1).
dd::Real invert_basic_dd(i64 X, i64 a, dd::Real f, double lo, double hi);

struct DefectRecord {
  i64 r = 0;
  i64 l1 = 1;
  i64 l2 = 2;
  Rat b0;  // (d*(r+l1) - d*(r)) / l1
  Rat v;   // d*(r+l2) - d*(r) - l2 b0
};

std::vector<DefectRecord> defect_records(const ParamData& param, i64 l1, i64 l2);

Rat upsilon(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v, i64 l1, i64 l2);
Rat qoppa(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v, i64 l1, i64 l2);

// Closed forms p1, p2 and their defining cubic/quartic combinations.
struct DefectPolys {
  Rat p1, p2;
  Rat p1_combination, p2_combination;
};

DefectPolys defect_polys(i64 l1, i64 l2, const Rat& b0, const Rat& v);

// (X/d^5)(-4a + 10a^2/d)(p1(v) + p2(v)/d) and the measured error envelope.
Rat upsilon_eval_form(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v,
                      i64 l1, i64 l2);
double upsilon_envelope(i64 X, i64 d, i64 a, const Rat& b0, const Rat& v, i64 l1, i64 l2);

// 6 l1 X a v / d^4 - 12 l1 l2 (l2-l1) X a b0^2 / d^5 (sign follows the
// corrected second-difference expansion), plus its envelope.
Rat qoppa_leading(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v,
                  i64 l1, i64 l2);
double qoppa_envelope(i64 X, i64 d, i64 a, const Rat& b0, const Rat& v, i64 l1, i64 l2);

struct BoostEntry {
  i64 r = 0;
  i64 d_star = 0;
  double f_tilde = 0.0;
  i64 f_star = 0;
  i64 j_star = 0;  // f_star - floor(f_tilde)
  double g_value = 0.0;
  double dist = 0.0;
};

struct BoostReport {
  i64 a = 0;
  i64 j = 0;
  double envelope = 0.0;  // Delta^4/H^3 (Delta/A)^2 + Delta^2/(H^2 G A)
  i64 hits_at_envelope = 0;
  i64 hits_at_10x = 0;
  i64 skipped = 0;  // r values outside the invertible range
  std::vector<BoostEntry> entries;
};

BoostReport boosted_approx(const ParamData& param, i64 j);

}  // namespace sqf::diff
