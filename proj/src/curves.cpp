#include "sqflab/curves.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "sqflab/rng.hpp"

namespace sqf::curves {

i64 count_near(const CurveQuery& query) {
  if (query.hi < query.lo) return 0;
  if (query.hi - query.lo + 1 > kScanLimit) throw std::invalid_argument("count_near: range too large");
  if (!(query.delta > 0.0 && query.delta < 1.0))
    throw std::invalid_argument("count_near: delta in (0,1)");

  const dd::Real delta(query.delta);
  i64 count = 0;
  for (i64 n = query.lo; n <= query.hi; ++n) {
    dd::Real value = query.phi(n);
    dd::Real dist = dd::dd_dist_to_z(value);
    double margin = std::abs(dd::to_double(dist) - query.delta);
    double guard = 1e-28 * std::max(1.0, std::abs(dd::to_double(value)));
    if (margin < guard && query.phi_exact) {
      if (dist_to_z(query.phi_exact(n)) <= rat_from_double(query.delta)) ++count;
    } else if (dist <= delta) {
      ++count;
    }
  }
  return count;
}

double bound_frac(double L, double V, double delta) {
  if (!(V > 0.0)) throw std::invalid_argument("bound_frac: need V > 0");
  if (L < 0.0 || !(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bound_frac: bad L or delta");
  return (L + 1.0) * (1.0 + delta / V);
}

double bound_stat(double N, double T, double delta, bool* hypothesis_ok) {
  if (!(N > 0.0 && T > 0.0 && delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("bound_stat: need N, T > 0 and delta in (0,1)");
  if (hypothesis_ok) *hypothesis_ok = N >= T / delta;
  return N * (delta + std::sqrt(delta / T)) + T + 1.0;
}

double bound_poisson(double N, double T, double delta) {
  if (!(N > 0.0 && T > 0.0 && delta > 0.0))
    throw std::invalid_argument("bound_poisson: need N, T, delta > 0");
  double root = std::sqrt(T / delta);
  return N * delta + root + N / root;
}

Ft6Bound bound_ft6(double N, double T, double delta, int r, double c_r) {
  if (r < 3) throw std::invalid_argument("bound_ft6: need r >= 3");
  if (!(N > 0.0 && T > 0.0 && delta > 0.0))
    throw std::invalid_argument("bound_ft6: need N, T, delta > 0");
  double rd = r;
  Ft6Bound out;
  out.value = std::pow(T, 2.0 / (rd * (rd + 1.0))) * std::pow(N, (rd - 1.0) / (rd + 1.0))
            + N * std::pow(delta, 2.0 / ((rd - 1.0) * (rd - 2.0)))
            + N * std::pow(delta * T * std::pow(N, 1.0 - rd), 1.0 / (rd * rd - 3.0 * rd + 4.0));
  double cap1 = T * std::pow(N, -rd + 2.0);
  double cap2 = std::pow(T, (rd - 4.0) / (rd - 2.0)) * std::pow(N, -rd + 3.0) + T * std::pow(N, -rd + 1.0);
  out.hypothesis_ok = delta <= c_r * std::min(cap1, cap2);
  return out;
}

std::vector<BoundReport> validate_family(const CurveFamily& family, int trials, u64 seed,
                                         int threads) {
  if (trials < 1) throw std::invalid_argument("validate_family: need trials >= 1");
  std::vector<BoundReport> reports(static_cast<size_t>(trials));

  auto run_trial = [&](int i) {
    u64 trial_seed = task_seed(seed, static_cast<u64>(i));
    FamilyInstance inst = family.generate(trial_seed);
    BoundReport rep;
    rep.family = family.name;
    rep.seed = trial_seed;
    rep.brute = count_near(inst.query);
    rep.bound = inst.bound;
    rep.ratio = static_cast<double>(rep.brute) / std::max(inst.bound, 1.0);
    rep.hypothesis_ok = inst.hypothesis_ok;
    reports[static_cast<size_t>(i)] = rep;
  };

  if (threads <= 1) {
    for (int i = 0; i < trials; ++i) run_trial(i);
  } else {
    std::vector<std::thread> pool;
    int stride = threads;
    for (int t = 0; t < stride; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < trials; i += stride) run_trial(i);
      });
    for (auto& th : pool) th.join();
  }
  return reports;
}

// phi(n) = alpha n + beta, alpha = V; I spans L/V so the variation is ~L.
CurveFamily family_linear(double L_max) {
  return {"linear_frac", [L_max](u64 seed) {
    SplitMix64 rng(seed);
    double V = 0.01 + 0.49 * rng.uniform01();
    double L = L_max * rng.uniform01();
    double delta = 0.01 + 0.9 * rng.uniform01();
    i64 n0 = rng.range(1, 1'000'000);
    i64 len = std::max<i64>(1, static_cast<i64>(L / V));
    Rat alpha = rat_from_double(V), beta = rat_from_double(rng.uniform01());

    FamilyInstance inst;
    inst.query.lo = n0;
    inst.query.hi = n0 + len;
    inst.query.delta = delta;
    inst.query.phi = [alpha, beta](i64 n) {
      return dd::from_rat(alpha) * dd::from_i64(n) + dd::from_rat(beta);
    };
    inst.query.phi_exact = [alpha, beta](i64 n) { return alpha * to_rat(n) + beta; };
    inst.bound = bound_frac(L, V, delta);
    return inst;
  }};
}

// Quadratic with an interior critical point: the two-monomial situation of
// the stationary bound.
CurveFamily family_two_monomial() {
  return {"stat_two_monomial", [](u64 seed) {
    SplitMix64 rng(seed);
    double T = std::pow(10.0, 1.0 + 2.0 * rng.uniform01());   // 10 .. 1000
    double delta = std::pow(10.0, -2.0 + rng.uniform01());    // 0.01 .. 0.1
    double K = 1.0 + 2.0 * rng.uniform01();
    i64 N = static_cast<i64>(K * T / delta) + 1;
    i64 m = N + rng.range(0, N / 4);  // vertex inside the range
    i64 Ti = static_cast<i64>(T);

    FamilyInstance inst;
    inst.query.lo = N;
    inst.query.hi = 2 * N;
    inst.query.delta = delta;
    inst.query.phi = [Ti, m, N](i64 n) {
      dd::Real u = dd::from_i64(n - m) / dd::from_i64(N);
      return dd::from_i64(Ti) * u * u;
    };
    inst.query.phi_exact = [Ti, m, N](i64 n) {
      Rat u = make_rat(n - m, N);
      return to_rat(Ti) * u * u;
    };
    bool hyp = false;
    inst.bound = bound_stat(static_cast<double>(N), T, delta, &hyp);
    inst.hypothesis_ok = hyp;
    return inst;
  }};
}

CurveFamily family_stat_witness(double T, double delta) {
  return {"stat_witness", [T, delta](u64 seed) {
    SplitMix64 rng(seed);
    i64 N = static_cast<i64>(T / delta) * rng.range(1, 3);
    i64 Ti = static_cast<i64>(T);
    FamilyInstance inst;
    inst.query.lo = N / 2;
    inst.query.hi = 2 * N;
    inst.query.delta = delta;
    inst.query.phi = [Ti, N](i64 n) {
      dd::Real u = dd::from_i64(n - N) / dd::from_i64(N);
      return dd::from_i64(Ti) * u * u;
    };
    inst.query.phi_exact = [Ti, N](i64 n) {
      Rat u = make_rat(n - N, N);
      return to_rat(Ti) * u * u;
    };
    bool hyp = false;
    inst.bound = bound_stat(static_cast<double>(N), T, delta, &hyp);
    inst.hypothesis_ok = hyp;
    return inst;
  }};
}

// T F(n/N) with F(x) = x^2 on [1/2, 5/2]; |F''| = 2.
CurveFamily family_poisson_quadratic() {
  return {"poisson_quadratic", [](u64 seed) {
    SplitMix64 rng(seed);
    i64 Ti = static_cast<i64>(std::pow(10.0, 2.0 + 3.0 * rng.uniform01()));
    double delta = std::pow(10.0, -3.0 + 2.0 * rng.uniform01());
    i64 N = rng.range(2'000, 60'000);

    FamilyInstance inst;
    inst.query.lo = (N + 1) / 2;
    inst.query.hi = (5 * N) / 2;
    inst.query.delta = delta;
    inst.query.phi = [Ti, N](i64 n) {
      dd::Real u = dd::from_i64(n) / dd::from_i64(N);
      return dd::from_i64(Ti) * u * u;
    };
    inst.query.phi_exact = [Ti, N](i64 n) {
      Rat u = make_rat(n, N);
      return to_rat(Ti) * u * u;
    };
    inst.bound = bound_poisson(static_cast<double>(N), static_cast<double>(Ti), delta);
    return inst;
  }};
}

// f(n) = X/n^2 over n ~ D with T = X/D^2, delta = H/D^2, r = 4.
CurveFamily family_inverse_square(double c_r) {
  return {"ft6_inverse_square", [c_r](u64 seed) {
    SplitMix64 rng(seed);
    i64 X = rng.range(1'000'000'000LL, 1'000'000'000'000LL);
    i64 H = static_cast<i64>(std::pow(static_cast<double>(X), 0.2));
    double d_cap = std::pow(static_cast<double>(X) / static_cast<double>(H), 1.0 / 3.0) / 8.0;
    std::vector<i64> feasible;
    for (i64 D = 16; D <= static_cast<i64>(d_cap); D *= 2)
      if (static_cast<double>(H) / (static_cast<double>(D) * D) < 1.0) feasible.push_back(D);
    i64 D = feasible.empty() ? 16 : feasible[rng.below(feasible.size())];

    double T = static_cast<double>(X) / (static_cast<double>(D) * D);
    double delta = static_cast<double>(H) / (static_cast<double>(D) * D);
    FamilyInstance inst;
    inst.query.lo = D + 1;
    inst.query.hi = static_cast<i64>(std::exp(1.0) * static_cast<double>(D));
    inst.query.delta = delta;
    inst.query.phi = [X](i64 n) { return dd::from_i64(X) / (dd::from_i64(n) * dd::from_i64(n)); };
    inst.query.phi_exact = [X](i64 n) { return make_rat(to_int(X), to_int(n) * to_int(n)); };
    Ft6Bound b = bound_ft6(static_cast<double>(D), T, delta, 4, c_r);
    inst.bound = b.value;
    inst.hypothesis_ok = b.hypothesis_ok;
    return inst;
  }};
}

}  // namespace sqf::curves
