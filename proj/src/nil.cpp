#include "sqflab/nil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "sqflab/rng.hpp"

namespace sqf::nil {

namespace {

template <class S>
struct Ops;

template <>
struct Ops<dd::Real> {
  static dd::Real floor(dd::Real x) { return dd::dd_floor(x); }
  static dd::Real frac(dd::Real x) { return dd::dd_frac(x); }
};

template <>
struct Ops<Rat> {
  static Rat floor(const Rat& x) { return Rat(floor_rat(x)); }
  static Rat frac(const Rat& x) { return frac_rat(x); }
};

template <class S>
S eval_poly(const Poly3& p, i64 n) {
  if constexpr (std::is_same_v<S, Rat>) {
    return p.eval(n);
  } else {
    return p.eval_dd(n);
  }
}

// dd images of a Poly3, cached for scan loops.
struct PolyDd {
  std::array<dd::Real, 4> c;

  explicit PolyDd(const Poly3& p)
      : c{dd::from_rat(p.c[0]), dd::from_rat(p.c[1]), dd::from_rat(p.c[2]), dd::from_rat(p.c[3])} {}

  dd::Real eval(i64 n) const {
    dd::Real x = dd::from_i64(n);
    return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  }
};

}  // namespace

template <class S>
Reduced<S> reduce(const GPoint<S>& g) {
  S m12 = -Ops<S>::floor(g.x12);
  S m23 = -Ops<S>::floor(g.x23);
  S t2 = g.x12 + m12;
  S t3 = g.x23 + m23;
  S t4_raw = g.x13 - g.x12 * g.x23;
  S t4_pre = t4_raw - m12 * (g.x23 + m23);
  S m13 = -Ops<S>::floor(t4_pre);
  S t4 = t4_pre + m13;
  S k = Ops<S>::floor(g.t);
  S t1 = g.t - k;

  Reduced<S> out;
  out.c = {t1, t2, t3, t4};
  // g * gamma' = phi(c) with gamma' = (-k, [m12, m13, m23]); return gamma'^{-1}.
  out.gamma.t = k;
  out.gamma.x12 = -m12;
  out.gamma.x23 = -m23;
  out.gamma.x13 = m12 * m23 - m13;
  return out;
}

template Reduced<dd::Real> reduce<dd::Real>(const GPoint<dd::Real>&);
template Reduced<Rat> reduce<Rat>(const GPoint<Rat>&);

template <class S>
S lip_value(const Malcev<S>& c) {
  return Ops<S>::frac(c.t1 + c.t4 + c.t2 * Ops<S>::frac(c.t3));
}

template dd::Real lip_value<dd::Real>(const Malcev<dd::Real>&);
template Rat lip_value<Rat>(const Malcev<Rat>&);

Rat Poly3::eval(i64 n) const {
  Rat x = to_rat(n);
  return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
}

dd::Real Poly3::eval_dd(i64 n) const { return PolyDd(*this).eval(n); }

template <class S>
GPoint<S> poly_orbit(const BracketSeq& seq, i64 n) {
  Malcev<S> c{eval_poly<S>(seq.f3, n), eval_poly<S>(seq.f1, n), -eval_poly<S>(seq.f2, n), S{}};
  return from_malcev(c);
}

template GPoint<dd::Real> poly_orbit<dd::Real>(const BracketSeq&, i64);
template GPoint<Rat> poly_orbit<Rat>(const BracketSeq&, i64);

dd::Real bracket_value(const BracketSeq& seq, i64 n) {
  dd::Real f1 = seq.f1.eval_dd(n), f2 = seq.f2.eval_dd(n), f3 = seq.f3.eval_dd(n);
  return dd::dd_frac(f3 + f1 * dd::dd_frac(f2));
}

Rat bracket_value_exact(const BracketSeq& seq, i64 n) {
  return frac_rat(seq.f3.eval(n) + seq.f1.eval(n) * frac_rat(seq.f2.eval(n)));
}

std::string convention_name(BracketConvention c) {
  switch (c) {
    case BracketConvention::plus_frac: return "f3 + f1*frac(f2)";
    case BracketConvention::plus_floor: return "f3 + f1*floor(f2)";
    case BracketConvention::minus_frac: return "f3 + f1*frac(-f2)";
    case BracketConvention::minus_floor: return "f3 + f1*floor(-f2)";
  }
  return "?";
}

ReconcileReport reconcile(const BracketSeq& seq, i64 N) {
  if (N < 1) throw std::invalid_argument("reconcile: need N >= 1");
  std::array<Rat, 4> worst{Rat(0), Rat(0), Rat(0), Rat(0)};
  for (i64 n = 1; n <= N; ++n) {
    GPoint<Rat> g = poly_orbit<Rat>(seq, n);
    Rat pipeline = lip_value(reduce(g).c);
    Rat f1 = seq.f1.eval(n), f2 = seq.f2.eval(n), f3 = seq.f3.eval(n);
    std::array<Rat, 4> candidates{
        frac_rat(f3 + f1 * frac_rat(f2)),
        frac_rat(f3 + f1 * Rat(floor_rat(f2))),
        frac_rat(f3 + f1 * frac_rat(-f2)),
        frac_rat(f3 + f1 * Rat(floor_rat(-f2)))};
    for (int i = 0; i < 4; ++i) {
      Rat dist = dist_to_z(pipeline - candidates[i]);
      if (dist > worst[i]) worst[i] = dist;
    }
  }
  ReconcileReport rep;
  Rat tol = make_rat(1, 1'000'000'000);
  int matches = 0;
  for (int i = 0; i < 4; ++i) {
    rep.max_distance[static_cast<size_t>(i)] = to_double(worst[i]);
    if (worst[i] < tol) {
      ++matches;
      rep.reconciled = i;
    }
  }
  if (matches == 4) rep.all_coincide = true;
  if (matches > 1 && matches < 4) rep.reconciled = -2;  // ambiguous (degenerate input)
  return rep;
}

double star_discrepancy(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("star_discrepancy: empty sample");
  for (double v : values)
    if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("star_discrepancy: values must be in [0,1)");
  std::sort(values.begin(), values.end());
  double n = static_cast<double>(values.size());
  double worst = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    double up = (static_cast<double>(i) + 1.0) / n - values[i];
    double down = values[i] - static_cast<double>(i) / n;
    worst = std::max(worst, std::max(up, down));
  }
  return worst;
}

EquiResult equi_test(const BracketSeq& seq, i64 N, double delta) {
  if (N < 10) throw std::invalid_argument("equi_test: need N >= 10");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("equi_test: delta in (0,1)");
  PolyDd f1(seq.f1), f2(seq.f2), f3(seq.f3);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(N));
  for (i64 n = 1; n <= N; ++n) {
    dd::Real v = dd::dd_frac(f3.eval(n) + f1.eval(n) * dd::dd_frac(f2.eval(n)));
    double vd = dd::to_double(v);
    if (vd >= 1.0) vd = 0.0;  // dd->double rounding at the wrap
    if (vd < 0.0) vd = 0.0;
    values.push_back(vd);
  }
  EquiResult res;
  res.d_star = star_discrepancy(std::move(values));
  res.equidistributed = res.d_star <= delta;
  return res;
}

std::vector<HorizontalChar> obstruction_search(const std::array<Rat, 3>& alphas, i64 N, i64 Q,
                                               double eps, size_t max_hits) {
  if (Q < 1) throw std::invalid_argument("obstruction_search: need Q >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("obstruction_search: need eps > 0");
  if (N < 1) throw std::invalid_argument("obstruction_search: need N >= 1");

  Int L = 1;
  for (const auto& a : alphas) {
    Int den = a.get_den();
    Int g;
    mpz_gcd(g.get_mpz_t(), L.get_mpz_t(), den.get_mpz_t());
    L = L / g * den;
  }
  if (!L.fits_slong_p())
    throw std::invalid_argument("obstruction_search: common denominator too large for exact scan");
  u64 mod = static_cast<u64>(L.get_si());

  std::array<u64, 3> p{};
  for (int i = 0; i < 3; ++i) {
    Int scaled = alphas[static_cast<size_t>(i)].get_num() * (L / alphas[static_cast<size_t>(i)].get_den());
    Int reduced;
    mpz_fdiv_r(reduced.get_mpz_t(), scaled.get_mpz_t(), L.get_mpz_t());
    p[static_cast<size_t>(i)] = static_cast<u64>(reduced.get_ui());
  }

  // accept  <=>  dist_num / L <= eps/N  <=>  dist_num <= floor(eps_num L / (eps_den N)).
  Rat eps_rat = rat_from_double(eps);
  Int bound_num = eps_rat.get_num() * L;
  Int bound_den = eps_rat.get_den() * to_int(N);
  Int thresh_z;
  mpz_fdiv_q(thresh_z.get_mpz_t(), bound_num.get_mpz_t(), bound_den.get_mpz_t());
  u64 thresh = thresh_z >= L ? mod : (thresh_z < 0 ? 0 : static_cast<u64>(thresh_z.get_ui()));

  auto modd = [mod](i128 v) -> u64 {
    i128 r = v % static_cast<i128>(mod);
    if (r < 0) r += mod;
    return static_cast<u64>(r);
  };

  std::vector<HorizontalChar> hits;
  auto consider = [&](i64 q1, i64 q2, i64 q3, u64 s) {
    u64 dist_num = std::min(s, mod - s == mod ? 0 : mod - s);
    if (s == 0) dist_num = 0;
    if (dist_num > thresh) return;
    HorizontalChar h;
    h.q1 = q1; h.q2 = q2; h.q3 = q3;
    h.dist = static_cast<double>(dist_num) / static_cast<double>(mod);
    hits.push_back(h);
  };

  // Canonical sign: first nonzero component positive ((q) and (-q) match).
  for (i64 q1 = 0; q1 <= Q; ++q1) {
    u64 base1 = modd(static_cast<i128>(q1) * p[0]);
    i64 q2_lo = q1 == 0 ? 0 : -Q;
    for (i64 q2 = q2_lo; q2 <= Q; ++q2) {
      u64 base12 = modd(static_cast<i128>(base1) + static_cast<i128>(q2) * p[1]);
      i64 q3_lo = (q1 == 0 && q2 == 0) ? 1 : -Q;
      u64 s = modd(static_cast<i128>(base12) + static_cast<i128>(q3_lo) * p[2]);
      for (i64 q3 = q3_lo; q3 <= Q; ++q3) {
        if (q1 != 0 || q2 != 0 || q3 != 0) consider(q1, q2, q3, s);
        s += p[2];
        if (s >= mod) s -= mod;
      }
    }
  }

  std::sort(hits.begin(), hits.end(), [](const HorizontalChar& a, const HorizontalChar& b) {
    i64 ha = std::max({std::abs(a.q1), std::abs(a.q2), std::abs(a.q3)});
    i64 hb = std::max({std::abs(b.q1), std::abs(b.q2), std::abs(b.q3)});
    if (ha != hb) return ha < hb;
    if (a.dist != b.dist) return a.dist < b.dist;
    return std::tie(a.q1, a.q2, a.q3) < std::tie(b.q1, b.q2, b.q3);
  });
  if (hits.size() > max_hits) hits.resize(max_hits);
  return hits;
}

namespace {

BracketSeq planted_sequence(SplitMix64& rng, i64& planted_q) {
  i64 q = rng.range(2, 20);
  i64 p2 = rng.range(1, q - 1);
  while (std::gcd(p2, q) != 1) p2 = rng.range(1, q - 1);
  i64 p3 = rng.range(0, q - 1);
  i64 r2 = rng.range(0, q - 1);
  i64 r3 = rng.range(0, q - 1);
  i64 c1 = rng.range(0, 3);
  i64 c0 = rng.range(0, 3);

  // All values land on the (1/q)-grid: f2, f3 rational linear over q and
  // f1 integer-valued, so D* >= 1/(2q) and equidistribution must fail.
  BracketSeq seq;
  seq.f1.c = {to_rat(c0), to_rat(c1), Rat(0), Rat(0)};
  seq.f2.c = {make_rat(r2, q), make_rat(p2, q), Rat(0), Rat(0)};
  seq.f3.c = {make_rat(r3, q), make_rat(p3, q), Rat(0), Rat(0)};
  planted_q = q;
  return seq;
}

BracketSeq control_sequence(SplitMix64& rng) {
  BracketSeq seq;
  seq.f1.c = {rat_from_double(rng.uniform01()), rat_from_double(rng.uniform01()), Rat(0), Rat(0)};
  seq.f2.c = {rat_from_double(rng.uniform01()), rat_from_double(rng.uniform01()),
              rat_from_double(rng.uniform01()), Rat(0)};
  seq.f3.c = {rat_from_double(rng.uniform01()), rat_from_double(rng.uniform01()),
              rat_from_double(rng.uniform01()), rat_from_double(rng.uniform01())};
  return seq;
}

}  // namespace

DichotomyReport dichotomy_experiment(int trials, i64 N, double delta, i64 Q, double eps, u64 seed,
                                     int threads) {
  if (trials < 1) throw std::invalid_argument("dichotomy_experiment: need trials >= 1");
  DichotomyReport rep;
  rep.N = N;
  rep.delta = delta;
  rep.Q = Q;
  rep.eps = eps;
  rep.seed = seed;
  rep.trials.resize(static_cast<size_t>(2 * trials));

  auto run_trial = [&](int slot) {
    bool planted = slot % 2 == 0;
    int index = slot / 2;
    SplitMix64 rng(task_seed(seed, static_cast<u64>(slot)));
    DichotomyTrial trial;
    trial.arm = planted ? "planted" : "control";
    trial.index = index;

    BracketSeq seq = planted ? planted_sequence(rng, trial.planted_q) : control_sequence(rng);
    for (int i = 0; i < 3; ++i) {
      const Poly3& f = i == 0 ? seq.f1 : (i == 1 ? seq.f2 : seq.f3);
      trial.alphas[static_cast<size_t>(i)] = rat_string(f.linear());
    }

    EquiResult equi = equi_test(seq, N, delta);
    trial.d_star = equi.d_star;
    trial.equidistributed = equi.equidistributed;
    if (!equi.equidistributed) {
      auto hits = obstruction_search({seq.f1.linear(), seq.f2.linear(), seq.f3.linear()}, N, Q, eps);
      trial.obstruction_found = !hits.empty();
      if (!hits.empty()) trial.best = hits.front();
      if (planted) {
        for (const auto& h : hits) {
          if (h.q1 % trial.planted_q == 0 && h.q2 % trial.planted_q == 0 &&
              h.q3 % trial.planted_q == 0) {
            trial.plant_recovered = true;
            break;
          }
        }
      }
      trial.flagged = !trial.obstruction_found;
    }
    rep.trials[static_cast<size_t>(slot)] = std::move(trial);
  };

  int total = 2 * trials;
  if (threads <= 1) {
    for (int i = 0; i < total; ++i) run_trial(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < total; i += threads) run_trial(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& trial : rep.trials) {
    if (trial.arm == "planted") {
      if (!trial.equidistributed) ++rep.planted_failures;
      if (trial.plant_recovered) ++rep.planted_recovered;
    } else {
      if (trial.equidistributed) ++rep.control_equidistributed;
      else ++rep.control_failures;
    }
    if (trial.flagged) ++rep.flags;
  }
  return rep;
}

LocalBracket local_bracket(const SmoothCurve& g1, const SmoothCurve& g2, const SmoothCurve& g3,
                           i64 n0, i64 window, double kappa) {
  if (window < 1) throw std::invalid_argument("local_bracket: need window >= 1");
  const SmoothCurve* curves[3] = {&g1, &g2, &g3};
  for (const auto* c : curves) {
    if (!c->deriv) throw std::invalid_argument("local_bracket: derivative metadata missing");
    if (c->N <= 1.0) throw std::invalid_argument("local_bracket: need N > 1");
  }
  double cap = std::pow(g3.N, kappa);
  if (static_cast<double>(window) > cap * (1.0 + 1e-12))
    throw std::invalid_argument("local_bracket: window exceeds N^kappa");

  double x0 = static_cast<double>(n0);
  int degree[3] = {1, 2, 3};
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; j <= degree[i]; ++j) {
      double expected = curves[i]->T / std::pow(curves[i]->N, j);
      double got = std::abs(curves[i]->deriv(x0, j));
      if (!(got >= 1e-3 * expected && got <= 1e3 * expected))
        throw std::invalid_argument("local_bracket: derivative scaling violated");
    }
  }

  LocalBracket out;
  out.seq.f1.c = {rat_from_double(g1.deriv(x0, 0)), rat_from_double(g1.deriv(x0, 1)), Rat(0), Rat(0)};
  out.seq.f2.c = {rat_from_double(g2.deriv(x0, 0)), rat_from_double(g2.deriv(x0, 1)),
                  rat_from_double(g2.deriv(x0, 2) / 2.0), Rat(0)};
  out.seq.f3.c = {rat_from_double(g3.deriv(x0, 0)), rat_from_double(g3.deriv(x0, 1)),
                  rat_from_double(g3.deriv(x0, 2) / 2.0), rat_from_double(g3.deriv(x0, 3) / 6.0)};

  double w = static_cast<double>(window);
  double fact[5] = {1, 1, 2, 6, 24};
  out.remainder = 0.0;
  for (int i = 0; i < 3; ++i) {
    int next = degree[i] + 1;
    out.remainder += curves[i]->next_deriv_bound * std::pow(w, next) / fact[next];
  }
  return out;
}

}  // namespace sqf::nil
