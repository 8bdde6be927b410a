#include "sqflab/intervals.hpp"

#include <cmath>
#include <stdexcept>

namespace sqf {

ScaleContext ScaleContext::make(i64 X, i64 H, double U, i64 D, double A, double W) {
  if (X < 1 || H < 0) throw std::invalid_argument("ScaleContext: need X >= 1, H >= 0");
  if (H == 0) throw std::invalid_argument("ScaleContext: need H >= 1 for derived scales");
  if (D < 1) throw std::invalid_argument("ScaleContext: need D >= 1");
  if (U <= 0 || A <= 0 || W <= 0) throw std::invalid_argument("ScaleContext: U, A, W must be positive");
  if (X > kDeskWidth || static_cast<i128>(2 * D) * (2 * D) > static_cast<i128>(kDeskWidth))
    throw std::overflow_error("ScaleContext: beyond desk-scale width");

  ScaleContext c;
  c.X = X;
  c.H = H;
  c.U = U;
  c.D = D;
  c.A = A;
  c.W = W;
  double x = static_cast<double>(X), h = static_cast<double>(H);
  c.G = x / std::pow(h, 5.0);
  c.Delta = static_cast<double>(D) / h;
  c.R = x * std::pow(A, 3.0) / (std::pow(c.Delta, 4.0) * std::pow(h, 4.0));
  c.B = (c.Delta * c.Delta / c.G) * std::pow(c.Delta / A, 3.0);
  c.F = c.G * h * h * A / std::pow(c.Delta, 3.0);
  return c;
}

const Rat& six_over_pi_sq() {
  // 0.607927101854026628663276779258365833426152648 to 45 digits.
  static const Rat value = make_rat(
      Int("607927101854026628663276779258365833426152648"),
      Int("1000000000000000000000000000000000000000000000"));
  return value;
}

static void check_interval(const Interval& iv) {
  if (iv.X < 1 || iv.H < 0) throw std::invalid_argument("interval: need X >= 1, H >= 0");
  if (iv.X > kDeskWidth - iv.H) throw std::overflow_error("interval: beyond desk-scale width");
}

i64 count_squarefree(const Interval& iv) {
  check_interval(iv);
  i64 hi = iv.X + iv.H;
  i64 root = static_cast<i64>(std::sqrt(static_cast<double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;
  auto primes = primes_upto(root);

  i64 total = 0;
  for (i64 lo = iv.X; lo <= hi; ) {
    i64 seg_hi = std::min(hi, lo + kSegmentLen - 1);
    auto flags = squarefree_flags(lo, seg_hi, primes);
    for (char f : flags) total += f;
    lo = seg_hi + 1;
  }
  return total;
}

i64 count_squarefree_bruteforce(const Interval& iv) {
  check_interval(iv);
  i64 total = 0;
  for (i64 n = iv.X; n <= iv.X + iv.H; ++n) total += is_squarefree(n) ? 1 : 0;
  return total;
}

// #{n in [X, X+H] : q | n} for q = d^2, exact.
static i64 count_multiples(i64 X, i64 H, i128 q) {
  i128 hi = floor_div_pos(static_cast<i128>(X) + H, q);
  i128 lo = ceil_div_pos(static_cast<i128>(X), q);
  return hi >= lo ? static_cast<i64>(hi - lo + 1) : 0;
}

static i64 dset_count(i64 X, i64 H, i64 D) {
  i64 count = 0;
  for (i64 d = D; d <= 2 * D; ++d)
    if (count_multiples(X, H, static_cast<i128>(d) * d) > 0) ++count;
  return count;
}

DecompositionReport mobius_decomposition(const Interval& iv, i64 D_minus, i64 D_plus) {
  check_interval(iv);
  if (D_minus < 1 || D_plus < D_minus)
    throw std::invalid_argument("mobius_decomposition: need 1 <= D_minus <= D_plus");
  if (static_cast<i128>(D_plus) * D_plus > static_cast<i128>(kDeskWidth) * 4)
    throw std::overflow_error("mobius_decomposition: D_plus^2 beyond desk-scale width");

  DecompositionReport rep;
  rep.interval = iv;
  rep.D_minus = D_minus;
  rep.D_plus = D_plus;
  rep.main_term = six_over_pi_sq() * to_rat(iv.H);

  i64 sum = 0;
  for (i64 lo = 1; lo <= D_plus; ) {
    i64 hi = std::min(D_plus, lo + kSegmentLen - 1);
    MobiusBlock block = mobius_block(lo, hi);
    for (i64 d = lo; d <= hi; ++d) {
      int mu = block.at(d);
      if (mu == 0) continue;
      sum += mu * count_multiples(iv.X, iv.H, static_cast<i128>(d) * d);
    }
    lo = hi + 1;
  }
  rep.mobius_sum = sum;
  rep.exact_count = count_squarefree(iv);
  rep.residual = to_rat(sum) - rep.main_term;

  for (i64 D = 1; D <= D_plus; D *= 2)
    if (D >= D_minus) rep.per_scale_counts[D] = dset_count(iv.X, iv.H, D);
  return rep;
}

DSet d_set(const ScaleContext& ctx) {
  DSet set;
  set.ctx = ctx;
  for (i64 d = ctx.D; d <= 2 * ctx.D; ++d)
    if (count_multiples(ctx.X, ctx.H, static_cast<i128>(d) * d) > 0) set.members.push_back(d);
  return set;
}

FracDSet frac_d_set(const ScaleContext& ctx) {
  FracDSet out;
  out.set.ctx = ctx;
  Rat threshold = make_rat(ctx.H, 1) / make_rat(to_int(ctx.D) * to_int(ctx.D), 1);
  DSet exact = d_set(ctx);
  size_t j = 0;
  for (i64 d = ctx.D; d <= 2 * ctx.D; ++d) {
    Rat x_over_d2 = make_rat(to_int(ctx.X), to_int(d) * to_int(d));
    bool frac_member = dist_to_z(x_over_d2) <= threshold;
    if (frac_member) out.set.members.push_back(d);
    bool exact_member = j < exact.members.size() && exact.members[j] == d;
    if (exact_member) ++j;
    if (frac_member != exact_member) out.symmetric_difference.push_back(d);
  }
  return out;
}

GapReport gap_scan(i64 N) {
  if (N < 2) throw std::invalid_argument("gap_scan: need N >= 2");
  if (N > kDeskWidth) throw std::overflow_error("gap_scan: beyond desk-scale width");

  i64 root = static_cast<i64>(std::sqrt(static_cast<double>(N)));
  while (root * root > N) --root;
  while ((root + 1) * (root + 1) <= N) ++root;
  auto primes = primes_upto(root);

  GapReport rep;
  rep.limit = N;
  i64 last = 0;  // 1 is squarefree; scan starts there
  for (i64 lo = 1; lo <= N; ) {
    i64 hi = std::min(N, lo + kSegmentLen - 1);
    auto flags = squarefree_flags(lo, hi, primes);
    for (i64 n = lo; n <= hi; ++n) {
      if (!flags[static_cast<size_t>(n - lo)]) continue;
      if (last != 0) {
        i64 gap = n - last;
        if (gap > rep.max_gap) {
          rep.max_gap = gap;
          rep.records.push_back({last, gap});
        }
      }
      last = n;
    }
    lo = hi + 1;
  }
  return rep;
}

std::vector<double> theta_star_ratios(const GapReport& report, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta_star_ratios: theta in (0,1)");
  std::vector<double> ratios;
  ratios.reserve(report.records.size());
  for (const auto& rec : report.records)
    ratios.push_back(static_cast<double>(rec.gap) / std::pow(static_cast<double>(rec.q), theta));
  return ratios;
}

}  // namespace sqf
