#include "grafting/cantor.hpp"

#include <algorithm>
#include <cmath>

#include "grafting/errors.hpp"

namespace grafting {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 mul_checked(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r))
    fail(ErrorCode::ContractViolation, "rational overflow; depth too deep for exact arithmetic");
  return r;
}

Rat make(__int128 n, __int128 d) {
  if (d == 0) fail(ErrorCode::ContractViolation, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rat{n, d};
}

}  // namespace

Rat Rat::of(long long num, long long den) { return make(num, den); }

Rat Rat::operator+(const Rat& o) const {
  return make(mul_checked(n, o.d) + mul_checked(o.n, d), mul_checked(d, o.d));
}
Rat Rat::operator-(const Rat& o) const {
  return make(mul_checked(n, o.d) - mul_checked(o.n, d), mul_checked(d, o.d));
}
Rat Rat::operator*(const Rat& o) const {
  return make(mul_checked(n, o.n), mul_checked(d, o.d));
}
bool Rat::operator<(const Rat& o) const {
  return mul_checked(n, o.d) < mul_checked(o.n, d);
}

void CantorMeasure::validate() const {
  if (branches.empty()) fail(ErrorCode::ConfigError, "measure needs at least one branch");
  Rat zero = Rat::of(0), one = Rat::of(1);
  Rat weight_sum = zero;
  Rat prev_end = zero;
  bool first = true;
  for (const Branch& b : branches) {
    if (b.offset < zero || !(b.scale < one) || !(zero < b.scale))
      fail(ErrorCode::ConfigError, "branch geometry must sit inside the unit interval");
    if (!(zero < b.weight) || !(b.weight < one))
      fail(ErrorCode::ConfigError, "branch weights must lie in (0,1)");
    if (!first && b.offset < prev_end)
      fail(ErrorCode::ConfigError, "branches must be disjoint and ordered");
    Rat end = b.offset + b.scale;
    if (one < end) fail(ErrorCode::ConfigError, "branch exits the unit interval");
    prev_end = end;
    weight_sum = weight_sum + b.weight;
    first = false;
  }
  if (weight_sum != Rat::of(1)) fail(ErrorCode::ConfigError, "branch weights must sum to 1");
  if (!(zero < total)) fail(ErrorCode::ConfigError, "total mass must be positive");
}

CantorMeasure CantorMeasure::ternary() {
  CantorMeasure m;
  m.branches = {{Rat::of(0), Rat::of(1, 3), Rat::of(1, 2)},
                {Rat::of(2, 3), Rat::of(1, 3), Rat::of(1, 2)}};
  return m;
}

MeasureInterval cantor_f(const CantorMeasure& m, const Rat& x, int depth) {
  Rat acc = Rat::of(0);
  Rat lo = Rat::of(0), len = Rat::of(1), mass = m.total;
  for (int level = 0; level < depth; ++level) {
    bool descended = false;
    for (const CantorMeasure::Branch& b : m.branches) {
      Rat child_lo = lo + b.offset * len;
      Rat child_hi = child_lo + b.scale * len;
      if (child_hi <= x) {
        acc = acc + mass * b.weight;
        continue;
      }
      if (x <= child_lo) return {acc, acc};
      lo = child_lo;
      len = b.scale * len;
      mass = mass * b.weight;
      descended = true;
      break;
    }
    if (!descended) return {acc, acc};
  }
  return {acc, acc + mass};
}

double cantor_f_mid(const CantorMeasure& m, double x, int depth) {
  // Doubles are exact dyadic rationals, so the query itself stays exact.
  double acc_lo = 0, acc_mass = 0;
  {
    MeasureInterval iv = cantor_f(m, Rat{(__int128)std::llround(x * 9007199254740992.0),
                                         (__int128)9007199254740992LL},
                                  depth);
    acc_lo = iv.lo.value();
    acc_mass = (iv.hi - iv.lo).value();
  }
  return acc_lo + acc_mass / 2;
}

namespace {

void walk(const CantorMeasure& m, int depth, Rat lo, Rat len, Rat mass, Rat acc, Graft1D& out) {
  if (depth == 0) {
    out.cells.push_back({lo, len, mass, acc});
    return;
  }
  Rat cursor = lo;
  for (const CantorMeasure::Branch& b : m.branches) {
    Rat child_lo = lo + b.offset * len;
    Rat child_hi = child_lo + b.scale * len;
    if (cursor < child_lo) out.gaps.push_back({cursor, child_lo, acc});
    walk(m, depth - 1, child_lo, b.scale * len, mass * b.weight, acc, out);
    acc = acc + mass * b.weight;
    cursor = child_hi;
  }
  Rat end = lo + len;
  if (cursor < end) out.gaps.push_back({cursor, end, acc});
}

}  // namespace

Graft1D graft1d(const CantorMeasure& m, int depth) {
  m.validate();
  if (depth < 1) fail(ErrorCode::ConfigError, "depth must be at least 1");
  Graft1D g;
  g.m = m;
  g.depth = depth;
  walk(m, depth, Rat::of(0), Rat::of(1), m.total, Rat::of(0), g);
  return g;
}

Rat Graft1D::u_prime_total() const {
  Rat sum = Rat::of(0);
  for (const Gap1D& gap : gaps) sum = sum + (gap.b - gap.a);
  for (const Cell1D& c : cells) sum = sum + c.len;
  return sum;
}

Rat Graft1D::graft_total() const {
  Rat sum = Rat::of(0);
  for (const Gap1D& gap : gaps) sum = sum + (gap.b - gap.a);
  for (const Cell1D& c : cells) sum = sum + c.len + c.mass;
  return sum;
}

double kappa(const Graft1D& g, double y) {
  double lo = 0, hi = 1;
  for (int it = 0; it < 59; ++it) {
    double mid = (lo + hi) / 2;
    if (mid + cantor_f_mid(g.m, mid, g.depth) < y)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

double deflate1d(const Graft1D& g, double y) { return cantor_f_mid(g.m, kappa(g, y), g.depth); }

Pushforward pushforward_mass(const Graft1D& g, const Rat& i_lo, const Rat& i_hi) {
  Pushforward pf{Rat::of(0), Rat::of(0)};
  for (const Cell1D& c : g.cells) {
    Rat r_lo = c.f_lo, r_hi = c.f_lo + c.mass;
    bool touches = i_lo < r_hi && r_lo < i_hi;
    bool inside = i_lo <= r_lo && r_hi <= i_hi;
    if (touches) pf.upper = pf.upper + c.mass;
    if (inside) pf.lower = pf.lower + c.mass;
  }
  return pf;
}

double pushforward_error(const Graft1D& g, int n_intervals) {
  double worst = 0;
  int seen = 0;
  for (int k = 1; seen < n_intervals && k < 30; ++k) {
    for (long long j = 0; j < (1LL << k) && seen < n_intervals; ++j, ++seen) {
      Rat i_lo = Rat::of(j, 1LL << k) * g.m.total;
      Rat i_hi = Rat::of(j + 1, 1LL << k) * g.m.total;
      Pushforward pf = pushforward_mass(g, i_lo, i_hi);
      double want = (i_hi - i_lo).value();
      worst = std::max({worst, want - pf.lower.value(), pf.upper.value() - want});
    }
  }
  return worst;
}

double net_error(const Graft1D& g, double net_step) {
  std::vector<double> values;
  values.push_back(0);
  values.push_back(g.m.total.value());
  for (const Gap1D& gap : g.gaps) values.push_back(gap.f.value());
  std::sort(values.begin(), values.end());
  double worst = 0;
  for (double t = net_step / 2; t < g.m.total.value(); t += net_step) {
    auto it = std::lower_bound(values.begin(), values.end(), t);
    double best = 1e300;
    if (it != values.end()) best = std::min(best, *it - t);
    if (it != values.begin()) best = std::min(best, t - *(it - 1));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace grafting
