#include "sqflab/differencing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sqf::diff {

static void require_nonzero(const Rat& den, const char* who) {
  if (den == 0) throw std::domain_error(std::string(who) + ": zero denominator");
}

static Rat inv_sq(const Rat& X, const Rat& t, const char* who) {
  require_nonzero(t, who);
  return X / (t * t);
}

Rat basic_diff(const Rat& X, const Rat& d, const Rat& a) {
  return inv_sq(X, d, "basic_diff") - inv_sq(X, d + a, "basic_diff");
}

Rat roth_diff(const Rat& X, const Rat& d, const Rat& a) {
  return -(2 * d - a) * inv_sq(X, d, "roth_diff") + (2 * d + 3 * a) * inv_sq(X, d + a, "roth_diff");
}

Rat quad_diff(const Rat& X, const Rat& d, const Rat& a, const Rat& b) {
  return -(b - a) * inv_sq(X, d, "quad_diff") + (b + a) * inv_sq(X, d + a, "quad_diff")
       - (b + a) * inv_sq(X, d + b, "quad_diff") + (b - a) * inv_sq(X, d + a + b, "quad_diff");
}

Rat quad_diff_mod(const Rat& X, const Rat& d, const Rat& a, const Rat& b) {
  return quad_diff(X, d, a, b) - (roth_diff(X, d, a) - roth_diff(X, d + b, a));
}

Rat double_diff(const Rat& X, const Rat& d, const Rat& a, const Rat& b) {
  return basic_diff(X, d, a) - basic_diff(X, d + b, a);
}

TaylorResidual taylor_residual(ExpansionKind kind, i64 X, i64 d, i64 a, i64 b) {
  if (d < 1) throw std::domain_error("taylor_residual: need d >= 1");
  bool uses_b = kind == ExpansionKind::quad || kind == ExpansionKind::quad_mod ||
                kind == ExpansionKind::second_diff;
  if (10 * a > d || (uses_b && 10 * b > d))
    throw std::domain_error("taylor_residual: expansion regime needs a, b <= d/10");
  if (a < 0 || b < 0) throw std::domain_error("taylor_residual: need a, b >= 0");

  Rat Xr = to_rat(X), dr = to_rat(d), ar = to_rat(a), br = to_rat(b);
  Rat d2 = dr * dr, d3 = d2 * dr, d4 = d3 * dr, d5 = d4 * dr, d6 = d5 * dr, d7 = d6 * dr;

  TaylorResidual out;
  switch (kind) {
    case ExpansionKind::std_diff:
      out.exact = a == 0 ? Rat(0) : basic_diff(Xr, dr, ar);
      out.truncation = Xr * ar / d3 * (2 - 3 * ar / dr);
      out.envelope = Xr * ar * ar * ar / d5;
      break;
    case ExpansionKind::roth:
      out.exact = a == 0 ? Rat(0) : roth_diff(Xr, dr, ar);
      out.truncation = Xr * ar * ar * ar / d4 * (1 - 2 * ar / dr);
      out.envelope = Xr * ar * ar * ar * ar * ar / d6;
      break;
    case ExpansionKind::quad:
      out.exact = quad_diff(Xr, dr, ar, br);
      out.truncation = 4 * Xr * ar * br * (ar - br) * (ar + br) / d5;
      out.envelope = Xr * ar * br * abs(ar - br) * (ar + br) * (ar + br) / d6;
      break;
    case ExpansionKind::quad_mod:
      out.exact = quad_diff_mod(Xr, dr, ar, br);
      out.truncation = Xr / d5 * (-4 * ar * br * br * br)
                     + Xr / d6 * (10 * ar * br * br * br * br + 10 * ar * ar * br * br * br);
      out.envelope = Xr * ar * br * br * br * (ar + br) * (ar + br) / d7;
      break;
    case ExpansionKind::second_diff:
      out.exact = double_diff(Xr, dr, ar, br);
      out.truncation = Xr / d4 * (6 * ar * br) - Xr / d5 * (12 * (ar * ar * br + ar * br * br));
      out.envelope = Xr * ar * br * (ar + br) * (ar + br) / d6;
      break;
  }
  out.residual = out.exact - out.truncation;
  if (out.envelope == 0) {
    out.ratio = 0.0;  // degenerate monomial: residual must vanish too
  } else {
    out.ratio = to_double(abs(out.residual) / out.envelope);
  }
  return out;
}

PairFamily pair_family(const DSet& dset, i64 a, PairRule rule) {
  if (a < 1) throw std::invalid_argument("pair_family: need a >= 1");
  PairFamily family;
  family.ctx = dset.ctx;
  family.a = a;
  family.rule = rule;
  if (rule == PairRule::consecutive) {
    for (size_t i = 0; i + 1 < dset.members.size(); ++i)
      if (dset.members[i + 1] - dset.members[i] == a) family.members.push_back(dset.members[i]);
  } else {
    std::set<i64> all(dset.members.begin(), dset.members.end());
    for (i64 d : dset.members)
      if (all.count(d + a)) family.members.push_back(d);
  }
  return family;
}

NearIntegerAudit near_integer_audit(const PairFamily& family) {
  if (family.members.empty()) throw std::invalid_argument("near_integer_audit: empty family");
  const i64 X = family.ctx.X, H = family.ctx.H, a = family.a;

  NearIntegerAudit audit;
  bool first = true;
  for (i64 d : family.members) {
    Rat d2 = to_rat(d) * to_rat(d);
    Rat e2 = to_rat(d + a) * to_rat(d + a);
    Rat bound_basic = to_rat(H) / d2 + to_rat(H) / e2;
    Rat bound_roth = to_rat(2 * d - a) * to_rat(H) / d2 + to_rat(2 * d + 3 * a) * to_rat(H) / e2;
    Rat slack_basic = bound_basic - dist_to_z(basic_diff(X, d, a));
    Rat slack_roth = bound_roth - dist_to_z(roth_diff(X, d, a));
    if (slack_basic < 0 || slack_roth < 0) ++audit.violations;
    if (first || slack_basic < audit.min_slack_basic) audit.min_slack_basic = slack_basic;
    if (first || slack_roth < audit.min_slack_roth) audit.min_slack_roth = slack_roth;
    first = false;
    ++audit.checked;
  }
  return audit;
}

SpacingAudit spacing_audit(const PairFamily& family) {
  if (family.members.size() < 2) throw std::invalid_argument("spacing_audit: need >= 2 members");
  SpacingAudit audit;
  audit.min_spacing = family.members[1] - family.members[0];
  for (size_t i = 1; i + 1 < family.members.size(); ++i)
    audit.min_spacing = std::min(audit.min_spacing, family.members[i + 1] - family.members[i]);
  const auto& c = family.ctx;
  double h = static_cast<double>(c.H);
  audit.threshold = std::pow(static_cast<double>(family.a), -1.0 / 3.0) *
                    std::pow(c.Delta, 5.0 / 3.0) *
                    std::pow(std::pow(h, 5.0) / static_cast<double>(c.X), 1.0 / 3.0);
  audit.lemma_ratio = static_cast<double>(audit.min_spacing) / audit.threshold;
  return audit;
}

double roth_eval(i64 X, i64 a, double t) {
  double s = t * (t + static_cast<double>(a));
  return static_cast<double>(X) * std::pow(static_cast<double>(a), 3.0) / (s * s);
}

double basic_eval(i64 X, i64 a, double t) {
  double ad = static_cast<double>(a);
  double s = t * (t + ad);
  return static_cast<double>(X) * ad * (2.0 * t + ad) / (s * s);
}

dd::Real roth_eval_dd(i64 X, i64 a, dd::Real t) {
  dd::Real ad = dd::from_i64(a);
  dd::Real s = t * (t + ad);
  return dd::from_i64(X) * ad * ad * ad / (s * s);
}

dd::Real basic_eval_dd(i64 X, i64 a, dd::Real t) {
  dd::Real ad = dd::from_i64(a);
  dd::Real s = t * (t + ad);
  return dd::from_i64(X) * ad * (dd::Real(2.0) * t + ad) / (s * s);
}

// F_a'(t) = -2 X a (3t^2 + 3at + a^2) / (t^3 (t+a)^3), strictly negative.
dd::Real basic_deriv_dd(i64 X, i64 a, dd::Real t) {
  dd::Real ad = dd::from_i64(a);
  dd::Real num = dd::Real(3.0) * t * t + dd::Real(3.0) * ad * t + ad * ad;
  dd::Real t3 = t * t * t;
  dd::Real e3 = (t + ad) * (t + ad) * (t + ad);
  return dd::Real(-2.0) * dd::from_i64(X) * ad * num / (t3 * e3);
}

double invert_roth(i64 X, i64 a, double rho, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("invert_roth: need 0 < lo < hi");
  double flo = roth_eval(X, a, lo), fmid = roth_eval(X, a, 0.5 * (lo + hi)), fhi = roth_eval(X, a, hi);
  if (!(flo > fmid && fmid > fhi))
    throw std::invalid_argument("invert_roth: bracket not strictly monotone");
  if (!(rho <= flo && rho >= fhi)) throw std::invalid_argument("invert_roth: rho outside bracket range");

  long double lo_l = lo, hi_l = hi;
  auto eval = [&](long double t) {
    long double s = t * (t + static_cast<long double>(a));
    return static_cast<long double>(X) * static_cast<long double>(a) *
           static_cast<long double>(a) * static_cast<long double>(a) / (s * s);
  };
  for (int it = 0; it < 90; ++it) {
    long double mid = 0.5L * (lo_l + hi_l);
    if (eval(mid) >= rho) lo_l = mid; else hi_l = mid;
  }
  long double t = 0.5L * (lo_l + hi_l);
  // Safeguarded Newton polish; R'(t) = -2 X a^3 (2t+a) / (t(t+a))^3.
  for (int it = 0; it < 4; ++it) {
    long double ad = a;
    long double s = t * (t + ad);
    long double val = static_cast<long double>(X) * ad * ad * ad / (s * s);
    long double deriv = -2.0L * static_cast<long double>(X) * ad * ad * ad * (2.0L * t + ad) / (s * s * s);
    long double step = (val - static_cast<long double>(rho)) / deriv;
    long double next = t - step;
    if (next > lo_l && next < hi_l) t = next;
  }
  double result = static_cast<double>(t);
  if (std::abs(roth_eval(X, a, result) - rho) > 1e-12 * std::abs(rho))
    throw std::runtime_error("invert_roth: tolerance not reached");
  return result;
}

dd::Real invert_basic_dd(i64 X, i64 a, dd::Real f, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("invert_basic_dd: need 0 < lo < hi");
  double flo = basic_eval(X, a, lo), fhi = basic_eval(X, a, hi);
  double fd = dd::to_double(f);
  if (!(flo > fhi)) throw std::invalid_argument("invert_basic_dd: bracket not monotone");
  if (!(fd <= flo && fd >= fhi)) throw std::invalid_argument("invert_basic_dd: value outside bracket");

  long double lo_l = lo, hi_l = hi;
  auto eval = [&](long double t) {
    long double ad = a;
    long double s = t * (t + ad);
    return static_cast<long double>(X) * ad * (2.0L * t + ad) / (s * s);
  };
  for (int it = 0; it < 70; ++it) {
    long double mid = 0.5L * (lo_l + hi_l);
    if (eval(mid) >= fd) lo_l = mid; else hi_l = mid;
  }
  dd::Real t(static_cast<double>(0.5L * (lo_l + hi_l)));
  for (int it = 0; it < 4; ++it) {
    dd::Real val = basic_eval_dd(X, a, t) - f;
    dd::Real deriv = basic_deriv_dd(X, a, t);
    t = t - val / deriv;
  }
  return t;
}

ParamData roth_param(const PairFamily& family) {
  if (family.members.empty()) throw std::invalid_argument("roth_param: empty family");
  ParamData param;
  param.ctx = family.ctx;
  param.a = family.a;
  const i64 X = family.ctx.X, a = family.a;

  for (i64 d : family.members) {
    Int den = to_int(d) * to_int(d) * to_int(d + a) * to_int(d + a);
    Rat value = make_rat(to_int(X) * to_int(a) * to_int(a) * to_int(a), den);
    if (is_half_integer_tie(value)) ++param.ties;
    i64 r = int_to_i64(nearest_int(value));
    param.r_star[d] = r;
    param.fibers[r].push_back(d);
  }
  for (auto& [r, ds] : param.fibers) {
    param.r_set.push_back(r);
    param.d_star[r] = ds.front();  // members sorted, so front is the smallest
    param.max_fiber = std::max(param.max_fiber, ds.size());
  }

  double lo = 0.5 * static_cast<double>(family.members.front());
  double hi = 2.0 * static_cast<double>(family.members.back() + a);
  for (i64 r : param.r_set) {
    if (r <= 0) continue;  // R_a > 0 everywhere; r = 0 has no preimage
    double rho = static_cast<double>(r);
    if (rho > roth_eval(X, a, lo) || rho < roth_eval(X, a, hi)) continue;
    param.tilde[r] = invert_roth(X, a, rho, lo, hi);
  }

  const auto& c = family.ctx;
  double scale = std::pow(c.Delta / c.A, 8.0 / 3.0) *
                 std::pow(std::pow(static_cast<double>(c.H), 5.0) / static_cast<double>(c.X), 2.0 / 3.0);
  param.fiber_bound_const = scale > 0 ? (static_cast<double>(param.max_fiber) - 1.0) / scale : 0.0;
  return param;
}

std::vector<DefectRecord> defect_records(const ParamData& param, i64 l1, i64 l2) {
  if (!(0 < l1 && l1 < l2)) throw std::invalid_argument("defect_records: need 0 < l1 < l2");
  std::set<i64> rs(param.r_set.begin(), param.r_set.end());
  std::vector<DefectRecord> records;
  for (i64 r : param.r_set) {
    if (!rs.count(r + l1) || !rs.count(r + l2)) continue;
    i64 d0 = param.d_star.at(r);
    i64 d1 = param.d_star.at(r + l1);
    i64 d2 = param.d_star.at(r + l2);
    DefectRecord rec;
    rec.r = r;
    rec.l1 = l1;
    rec.l2 = l2;
    rec.b0 = make_rat(d1 - d0, l1);
    rec.v = to_rat(d2 - d0) - to_rat(l2) * rec.b0;
    records.push_back(std::move(rec));
  }
  return records;
}

Rat upsilon(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v, i64 l1, i64 l2) {
  Rat w1 = to_rat(l2 * l2 * (l2 - l1) * (l2 - l1));
  Rat w2 = to_rat(l1 * l1 * (l2 - l1) * (l2 - l1));
  Rat w3 = to_rat(l1 * l1 * l2 * l2);
  return w1 * quad_diff_mod(X, d, a, to_rat(l1) * b0)
       - w2 * quad_diff_mod(X, d, a, to_rat(l2) * b0 + v)
       + w3 * quad_diff_mod(X, d + to_rat(l1) * b0, a, to_rat(l2 - l1) * b0 + v);
}

Rat qoppa(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v, i64 l1, i64 l2) {
  return to_rat(l1) * double_diff(X, d, a, to_rat(l2) * b0 + v)
       - to_rat(l2) * double_diff(X, d, a, to_rat(l1) * b0);
}

DefectPolys defect_polys(i64 l1, i64 l2, const Rat& b0, const Rat& v) {
  Rat L1 = to_rat(l1), L2 = to_rat(l2);
  DefectPolys out;
  out.p1 = 3 * L1 * L1 * L1 * L2 * (L2 - L1) * b0 * v * v
         + L1 * L1 * L1 * (2 * L2 - L1) * v * v * v;
  out.p2 = 2 * L1 * L1 * L1 * L2 * L2 * (L2 - L1) * (L2 - L1) * b0 * b0 * b0 * v
         + 6 * L1 * L1 * L1 * L2 * L2 * (L2 - L1) * b0 * b0 * v * v
         + 2 * L1 * L1 * L1 * L2 * (3 * L2 - 2 * L1) * b0 * v * v * v
         + L1 * L1 * L1 * (2 * L2 - L1) * v * v * v * v;

  auto cube = [](const Rat& x) { return x * x * x; };
  auto quart = [](const Rat& x) { return x * x * x * x; };
  Rat t1 = L1 * b0, t2 = L2 * b0 + v, t3 = (L2 - L1) * b0 + v;
  Rat w1 = L2 * L2 * (L2 - L1) * (L2 - L1);
  Rat w2 = L1 * L1 * (L2 - L1) * (L2 - L1);
  Rat w3 = L1 * L1 * L2 * L2;
  out.p1_combination = w1 * cube(t1) - w2 * cube(t2) + w3 * cube(t3);
  out.p2_combination = w1 * quart(t1) - w2 * quart(t2) + w3 * (quart(t3) + 2 * L1 * b0 * cube(t3));
  return out;
}

Rat upsilon_eval_form(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v,
                      i64 l1, i64 l2) {
  DefectPolys p = defect_polys(l1, l2, b0, v);
  Rat d5 = d * d * d * d * d;
  return X / d5 * (-4 * a + 10 * a * a / d) * (p.p1 + p.p2 / d);
}

double upsilon_envelope(i64 X, i64 d, i64 a, const Rat& b0, const Rat& v, i64 l1, i64 l2) {
  double b0d = std::abs(to_double(b0)), vd = std::abs(to_double(v));
  double ad = static_cast<double>(a), dd_ = static_cast<double>(d), Xd = static_cast<double>(X);
  double b1 = std::abs(static_cast<double>(l1) * b0d);
  double b2 = std::abs(static_cast<double>(l2) * b0d + vd) + vd;
  double b3 = std::abs(static_cast<double>(l2 - l1) * b0d + vd) + vd;
  double w1 = std::pow(static_cast<double>(l2 * (l2 - l1)), 2.0);
  double w2 = std::pow(static_cast<double>(l1 * (l2 - l1)), 2.0);
  double w3 = std::pow(static_cast<double>(l1 * l2), 2.0);
  auto tail = [&](double w, double b) { return w * std::pow(b, 3.0) * std::pow(ad + b, 2.0); };
  double shift = w3 * std::pow(b3, 3.0) * std::pow(b1, 2.0);
  return Xd * ad / std::pow(dd_, 7.0) * (tail(w1, b1) + tail(w2, b2) + tail(w3, b3) + shift);
}

Rat qoppa_leading(const Rat& X, const Rat& d, const Rat& a, const Rat& b0, const Rat& v,
                  i64 l1, i64 l2) {
  Rat d4 = d * d * d * d;
  return 6 * to_rat(l1) * X * a * v / d4
       - 12 * to_rat(l1) * to_rat(l2) * to_rat(l2 - l1) * X * a * b0 * b0 / (d4 * d);
}

double qoppa_envelope(i64 X, i64 d, i64 a, const Rat& b0, const Rat& v, i64 l1, i64 l2) {
  double b0d = std::abs(to_double(b0)), vd = std::abs(to_double(v));
  double ad = static_cast<double>(a), dd_ = static_cast<double>(d), Xd = static_cast<double>(X);
  double B1 = std::abs(static_cast<double>(l2) * b0d + vd);
  double B2 = static_cast<double>(l1) * b0d;
  double first = Xd * ad * static_cast<double>(l1) *
                 (ad * vd + static_cast<double>(l2) * b0d * vd + vd * vd) / std::pow(dd_, 5.0);
  double second = Xd * ad *
                  (static_cast<double>(l1) * std::pow(ad + B1, 3.0) +
                   static_cast<double>(l2) * std::pow(ad + B2, 3.0)) / std::pow(dd_, 6.0);
  return first + second;
}

BoostReport boosted_approx(const ParamData& param, i64 j) {
  const auto& c = param.ctx;
  const i64 X = c.X, a = param.a;
  BoostReport rep;
  rep.a = a;
  rep.j = j;
  double h = static_cast<double>(c.H);
  rep.envelope = std::pow(c.Delta, 4.0) / std::pow(h, 3.0) * std::pow(c.Delta / c.A, 2.0)
               + c.Delta * c.Delta / (h * h * c.G * c.A);

  i64 d_min = param.fibers.begin()->second.front();
  i64 d_max = d_min;
  for (const auto& [r, ds] : param.fibers)
    for (i64 d : ds) { d_min = std::min(d_min, d); d_max = std::max(d_max, d); }
  double lo = 0.5 * static_cast<double>(d_min);
  double hi = 2.0 * static_cast<double>(d_max + a);

  for (i64 r : param.r_set) {
    auto it = param.tilde.find(r);
    if (it == param.tilde.end()) { ++rep.skipped; continue; }

    // dd-refined tilde_d(r), then f_tilde = F_a(tilde_d(r)).
    dd::Real td(it->second);
    for (int k = 0; k < 3; ++k) {
      dd::Real val = roth_eval_dd(X, a, td) - dd::from_i64(r);
      dd::Real ad = dd::from_i64(a);
      dd::Real s = td * (td + ad);
      dd::Real deriv = dd::Real(-2.0) * dd::from_i64(X) * ad * ad * ad *
                       (dd::Real(2.0) * td + ad) / (s * s * s);
      td = td - val / deriv;
    }
    dd::Real f_tilde = basic_eval_dd(X, a, td);

    i64 d0 = param.d_star.at(r);
    Int den = to_int(d0) * to_int(d0) * to_int(d0 + a) * to_int(d0 + a);
    Rat f_exact = make_rat(to_int(X) * to_int(a) * (2 * to_int(d0) + to_int(a)), den);

    BoostEntry entry;
    entry.r = r;
    entry.d_star = d0;
    entry.f_tilde = dd::to_double(f_tilde);
    entry.f_star = int_to_i64(nearest_int(f_exact));
    entry.j_star = entry.f_star - static_cast<i64>(std::floor(entry.f_tilde));

    dd::Real target = f_tilde + dd::from_i64(j);
    double td_ = dd::to_double(target);
    if (!(td_ >= basic_eval(X, a, hi) && td_ <= basic_eval(X, a, lo))) { ++rep.skipped; continue; }
    dd::Real inv = invert_basic_dd(X, a, target, lo, hi);
    dd::Real deriv_inv = dd::Real(1.0) / basic_deriv_dd(X, a, inv);
    dd::Real g = inv - deriv_inv * dd::dd_frac(f_tilde);
    entry.g_value = dd::to_double(g);
    entry.dist = dd::to_double(dd::dd_dist_to_z(g));
    if (entry.dist <= rep.envelope) ++rep.hits_at_envelope;
    if (entry.dist <= 10.0 * rep.envelope) ++rep.hits_at_10x;
    rep.entries.push_back(entry);
  }
  return rep;
}

}  // namespace sqf::diff
