#include "sqflab/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "sqflab/curves.hpp"
#include "sqflab/differencing.hpp"
#include "sqflab/nil.hpp"
#include "sqflab/rng.hpp"

namespace sqf {

std::vector<ScaleContext> standard_scan_contexts() {
  std::vector<ScaleContext> out;
  auto add_grid = [&](i64 X, i64 H) {
    i64 root = static_cast<i64>(std::sqrt(static_cast<double>(X)));
    for (i64 D = 1; D <= root; D *= 2) {
      if (D < H) continue;
      out.push_back(ScaleContext::make(X, H, 4.0, D, 1.0, 4.0));
    }
  };
  // Theorem-regime windows, H = floor(X^{1/5}).
  add_grid(100'000'000LL, 39);
  add_grid(10'000'000'000LL, 100);
  // Enriched windows: H = 1e4 keeps D_{[D,2D]} populated through D ~ 4096.
  for (i64 D = 128; D <= 4096; D *= 2)
    out.push_back(ScaleContext::make(10'000'000'000LL, 10'000, 4.0, D, 1.0, 4.0));
  return out;
}

namespace {

double taylor_constant(diff::ExpansionKind kind, bool uses_b) {
  SplitMix64 rng(7);
  double worst = 0.0;
  for (i64 d : {100LL, 1000LL, 10000LL}) {
    std::vector<i64> as = {1, 2, std::max<i64>(1, d / 100), std::max<i64>(1, d / 20), d / 10};
    for (i64 a : as) {
      std::vector<i64> bs = uses_b ? as : std::vector<i64>{0};
      for (i64 b : bs) {
        auto res = diff::taylor_residual(kind, 1'000'000'000LL, d, a, b);
        worst = std::max(worst, res.ratio);
      }
    }
    for (int trial = 0; trial < 50; ++trial) {
      i64 a = 1 + static_cast<i64>(rng.below(static_cast<u64>(d / 10)));
      i64 b = uses_b ? 1 + static_cast<i64>(rng.below(static_cast<u64>(d / 10))) : 0;
      auto res = diff::taylor_residual(kind, 1'000'000'000LL, d, a, b);
      worst = std::max(worst, res.ratio);
    }
  }
  return worst;
}

struct ScanMeasurements {
  double nair_c_min = 1e300;
  double lemma27_c_min = 1e300;
  double fiber_c_max = 0.0;
  i64 families = 0;
  i64 triples = 0;
};

ScanMeasurements measure_scans() {
  ScanMeasurements m;
  for (const auto& base : standard_scan_contexts()) {
    DSet set = d_set(base);
    double h = static_cast<double>(base.H);
    double nair_threshold = std::pow(base.Delta, 4.0 / 3.0) *
                            std::pow(std::pow(h, 4.0) / static_cast<double>(base.X), 1.0 / 3.0);
    for (size_t i = 0; i + 2 < set.members.size(); ++i) {
      i64 g1 = set.members[i + 1] - set.members[i];
      i64 g2 = set.members[i + 2] - set.members[i + 1];
      m.nair_c_min = std::min(m.nair_c_min, static_cast<double>(std::max(g1, g2)) / nair_threshold);
      ++m.triples;
    }
    // Families at every gap the set realizes.
    std::vector<i64> gaps;
    for (size_t i = 0; i + 1 < set.members.size(); ++i)
      gaps.push_back(set.members[i + 1] - set.members[i]);
    std::sort(gaps.begin(), gaps.end());
    gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
    for (i64 a : gaps) {
      ScaleContext ctx = ScaleContext::make(base.X, base.H, base.U, base.D,
                                            static_cast<double>(a), base.W);
      DSet set_a = set;
      set_a.ctx = ctx;
      auto family = diff::pair_family(set_a, a);
      if (family.members.size() < 2) continue;
      ++m.families;
      m.lemma27_c_min = std::min(m.lemma27_c_min, diff::spacing_audit(family).lemma_ratio);
      m.fiber_c_max = std::max(m.fiber_c_max, diff::roth_param(family).fiber_bound_const);
    }
  }
  if (m.triples == 0) m.nair_c_min = 0.0;
  if (m.families == 0) m.lemma27_c_min = 0.0;
  return m;
}

double family_max_ratio(const curves::CurveFamily& family, int trials, u64 seed, int threads,
                        bool only_hypothesis_ok) {
  double worst = 0.0;
  for (const auto& rep : curves::validate_family(family, trials, seed, threads)) {
    if (only_hypothesis_ok && !rep.hypothesis_ok) continue;
    worst = std::max(worst, rep.ratio);
  }
  return worst;
}

double witness_min_constant() {
  double best = 1e300;
  for (double T : {100.0, 1000.0, 10000.0}) {
    for (double delta : {1e-2, 1e-3}) {
      auto fam = curves::family_stat_witness(T, delta);
      auto inst = fam.generate(task_seed(99, 0));
      i64 brute = curves::count_near(inst.query);
      double N = static_cast<double>(inst.query.hi) / 2.0;
      double floor_term = N * std::sqrt(delta / T);
      best = std::min(best, static_cast<double>(brute) / floor_term);
    }
  }
  return best;
}

void defect_grid(double& upsilon_c, double& qoppa_c) {
  SplitMix64 rng(11);
  upsilon_c = 0.0;
  qoppa_c = 0.0;
  for (i64 d : {200LL, 500LL, 2000LL}) {
    for (int trial = 0; trial < 60; ++trial) {
      i64 a = rng.range(1, 5);
      i64 l1 = rng.range(1, 3);
      i64 l2 = l1 + rng.range(1, 3);
      Rat b0 = make_rat(rng.range(-3 * l1, 3 * l1), l1);
      Rat v = make_rat(rng.range(-2 * l1, 2 * l1), l1);
      if (b0 == 0 && v == 0) continue;
      i64 X = 1'000'000'000LL;
      Rat Xr = to_rat(X), dr = to_rat(d), ar = to_rat(a);

      Rat ups = diff::upsilon(Xr, dr, ar, b0, v, l1, l2);
      Rat form = diff::upsilon_eval_form(Xr, dr, ar, b0, v, l1, l2);
      double env = diff::upsilon_envelope(X, d, a, b0, v, l1, l2);
      if (env > 0) upsilon_c = std::max(upsilon_c, std::abs(to_double(ups - form)) / env);

      Rat qp = diff::qoppa(Xr, dr, ar, b0, v, l1, l2);
      Rat lead = diff::qoppa_leading(Xr, dr, ar, b0, v, l1, l2);
      double qenv = diff::qoppa_envelope(X, d, a, b0, v, l1, l2);
      if (qenv > 0) qoppa_c = std::max(qoppa_c, std::abs(to_double(qp - lead)) / qenv);
    }
  }
}

double lipschitz_constant() {
  SplitMix64 rng(13);
  double worst = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    nil::Malcev<dd::Real> c{dd::Real(0.02 + 0.96 * rng.uniform01()),
                            dd::Real(0.02 + 0.96 * rng.uniform01()),
                            dd::Real(0.02 + 0.96 * rng.uniform01()),
                            dd::Real(0.02 + 0.96 * rng.uniform01())};
    double step = 1e-3;
    nil::Malcev<dd::Real> c2 = c;
    double dt[4] = {step * (rng.uniform01() - 0.5), step * (rng.uniform01() - 0.5),
                    step * (rng.uniform01() - 0.5), step * (rng.uniform01() - 0.5)};
    c2.t1 += dd::Real(dt[0]);
    c2.t2 += dd::Real(dt[1]);
    c2.t3 += dd::Real(dt[2]);
    c2.t4 += dd::Real(dt[3]);
    double denom = std::max(std::max(std::abs(dt[0]), std::abs(dt[1])),
                            std::max(std::abs(dt[2]), std::abs(dt[3])));
    if (denom == 0) continue;
    double v1 = dd::to_double(nil::lip_value(c));
    double v2 = dd::to_double(nil::lip_value(c2));
    double diff = std::abs(v1 - v2);
    diff = std::min(diff, 1.0 - diff);  // circle distance
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

double weyl_constant() {
  const i64 N = 10000;
  const double golden = 0.6180339887498948482;
  std::vector<double> values;
  values.reserve(static_cast<size_t>(N));
  double x = 0.0;
  for (i64 n = 0; n < N; ++n) {
    x += golden;
    x -= std::floor(x);
    values.push_back(x);
  }
  double d_star = nil::star_discrepancy(std::move(values));
  return d_star * static_cast<double>(N) / std::log(static_cast<double>(N));
}

}  // namespace

KeyValueFile run_calibration(int threads) {
  KeyValueFile kv;
  kv.set("bracket_convention", nil::convention_name(nil::BracketConvention::minus_frac));
  kv.set_double("tau", 0.01);
  kv.set_double("kappa", 0.10);
  kv.set_double("ft6_c_r", 0.01);

  kv.set_double("taylor_c_std", taylor_constant(diff::ExpansionKind::std_diff, false));
  kv.set_double("taylor_c_roth", taylor_constant(diff::ExpansionKind::roth, false));
  kv.set_double("taylor_c_quad", taylor_constant(diff::ExpansionKind::quad, true));
  kv.set_double("taylor_c_quad_mod", taylor_constant(diff::ExpansionKind::quad_mod, true));
  kv.set_double("taylor_c_second_diff", taylor_constant(diff::ExpansionKind::second_diff, true));

  ScanMeasurements scans = measure_scans();
  kv.set_double("nair_c_min", scans.nair_c_min);
  kv.set_double("lemma27_c_min", scans.lemma27_c_min);
  kv.set_double("fiber_c_max", scans.fiber_c_max);
  kv.set_int("scan_families", scans.families);
  kv.set_int("scan_triples", scans.triples);

  kv.set_double("bound_c_linear",
                family_max_ratio(curves::family_linear(50.0), 100, 2024, threads, false));
  kv.set_double("bound_c_stat",
                family_max_ratio(curves::family_two_monomial(), 100, 2025, threads, false));
  kv.set_double("bound_c_poisson",
                family_max_ratio(curves::family_poisson_quadratic(), 100, 2026, threads, false));
  kv.set_double("bound_c_ft6",
                family_max_ratio(curves::family_inverse_square(0.01), 100, 2027, threads, true));
  kv.set_double("witness_c_min", witness_min_constant());

  double ups_c = 0.0, qop_c = 0.0;
  defect_grid(ups_c, qop_c);
  kv.set_double("upsilon_c", ups_c);
  kv.set_double("qoppa_c", qop_c);

  kv.set_double("lipschitz_c", lipschitz_constant());
  kv.set_double("weyl_c", weyl_constant());
  return kv;
}

}  // namespace sqf
