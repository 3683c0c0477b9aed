#include "grafting/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace grafting {

namespace {

constexpr double kEps = 1e-13;

double sq(double x) { return x * x; }

}  // namespace

double dist(const H2Point& p, const H2Point& q) {
  // cosh d = 1 + |p-q|^2 / (2 y1 y2) rearranged through sinh(d/2) so short
  // distances keep full precision.
  double num = sq(p.x - q.x) + sq(p.y - q.y);
  return 2.0 * std::asinh(std::sqrt(num / (4.0 * p.y * q.y)));
}

Motion compose(const Motion& f, const Motion& g) {
  // Entries are real, so conjugation commutes with the matrix action and
  // composition is plain matrix product with xor of the flags.
  Motion m;
  m.a = f.a * g.a + f.b * g.c;
  m.b = f.a * g.b + f.b * g.d;
  m.c = f.c * g.a + f.d * g.c;
  m.d = f.c * g.b + f.d * g.d;
  m.conj = f.conj != g.conj;
  return m;
}

Motion inverse(const Motion& m) {
  double det = m.a * m.d - m.b * m.c;
  Motion r{m.d / det, -m.b / det, -m.c / det, m.a / det, m.conj};
  return r;
}

H2Point apply(const Motion& m, const H2Point& p) {
  Cx z = p.cx();
  if (m.conj) z = std::conj(z);
  Cx w = (m.a * z + m.b) / (m.c * z + m.d);
  return H2Point::from(w);
}

namespace {

// Image of a boundary point (real axis or infinity) under a motion.
// Conjugation is trivial on the boundary.
struct BPoint {
  bool inf;
  double x;
};

BPoint apply_boundary(const Motion& m, BPoint p) {
  if (p.inf) {
    if (std::abs(m.c) < kEps) return {true, 0.0};
    return {false, m.a / m.c};
  }
  double den = m.c * p.x + m.d;
  if (std::abs(den) < 1e-300) return {true, 0.0};
  return {false, (m.a * p.x + m.b) / den};
}

std::array<BPoint, 2> endpoints(const H2Geodesic& g) {
  if (g.vertical) return {BPoint{false, g.c}, BPoint{true, 0.0}};
  return {BPoint{false, g.c - g.r}, BPoint{false, g.c + g.r}};
}

H2Geodesic from_endpoints(BPoint e1, BPoint e2) {
  H2Geodesic g;
  if (e1.inf && e2.inf) fail(ErrorCode::ContractViolation, "degenerate geodesic endpoints");
  if (e1.inf || e2.inf) {
    g.vertical = true;
    g.c = e1.inf ? e2.x : e1.x;
    g.r = 1.0;
  } else {
    if (std::abs(e1.x - e2.x) < 1e-300)
      fail(ErrorCode::ContractViolation, "degenerate geodesic endpoints");
    g.vertical = false;
    g.c = 0.5 * (e1.x + e2.x);
    g.r = 0.5 * std::abs(e1.x - e2.x);
  }
  return g;
}

}  // namespace

H2Geodesic apply(const Motion& m, const H2Geodesic& g) {
  auto e = endpoints(g);
  H2Geodesic out = from_endpoints(apply_boundary(m, e[0]), apply_boundary(m, e[1]));
  // Preserve the parametrization direction: push a midpoint-and-tangent pair
  // through m and compare.
  H2Point p0 = geodesic_point(g, 0.0);
  H2Point p1 = geodesic_point(g, 0.05);
  double t0 = geodesic_coordinate(out, apply(m, p0));
  double t1 = geodesic_coordinate(out, apply(m, p1));
  out.orient = (t1 >= t0) ? +1 : -1;
  return out;
}

Motion reflection(const H2Geodesic& g) {
  if (g.vertical) {
    // z -> 2c - conj z
    return Motion{-1.0, 2.0 * g.c, 0.0, 1.0, true};
  }
  // z -> (c conj z + r^2 - c^2) / (conj z - c), normalized to det -1.
  return Motion{g.c / g.r, (g.r * g.r - g.c * g.c) / g.r, 1.0 / g.r, -g.c / g.r, true};
}

Motion normalize_to_axis(const H2Geodesic& g) {
  if (g.vertical) return Motion{1.0, -g.c, 0.0, 1.0, false};
  double s = std::sqrt(2.0 * g.r);
  return Motion{1.0 / s, -(g.c - g.r) / s, -1.0 / s, (g.c + g.r) / s, false};
}

Motion random_motion(Rng& rng, double spread) {
  double x0 = rng.uniform(-spread, spread);
  double t = rng.uniform(-spread, spread);
  double th = rng.uniform(0.0, 2.0 * M_PI);
  Motion trans{1.0, x0, 0.0, 1.0, false};
  Motion dil{std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2), false};
  Motion rot{std::cos(th / 2), std::sin(th / 2), -std::sin(th / 2), std::cos(th / 2), false};
  return compose(trans, compose(dil, rot));
}

H2Point geodesic_point(const H2Geodesic& g, double t) {
  t *= g.orient;
  if (g.vertical) return {g.c, std::exp(t)};
  double th = 2.0 * std::atan(std::exp(t));
  return {g.c + g.r * std::cos(th), g.r * std::sin(th)};
}

double geodesic_coordinate(const H2Geodesic& g, const H2Point& p) {
  double t;
  if (g.vertical) {
    t = std::log(p.y);
  } else {
    double th = std::atan2(p.y, p.x - g.c);
    t = std::log(std::tan(0.5 * th));
  }
  return t * g.orient;
}

std::array<double, 2> geodesic_tangent(const H2Geodesic& g, double t) {
  if (g.vertical) return {0.0, static_cast<double>(g.orient)};
  double th = 2.0 * std::atan(std::exp(t * g.orient));
  return {-std::sin(th) * g.orient, std::cos(th) * g.orient};
}

H2Geodesic geodesic_through(const H2Point& p, const H2Point& q) {
  H2Geodesic g;
  double scale = std::max({1.0, std::abs(p.x), std::abs(q.x), p.y, q.y});
  if (std::abs(p.x - q.x) < 1e-12 * scale) {
    g.vertical = true;
    g.c = 0.5 * (p.x + q.x);
    g.orient = (q.y > p.y) ? +1 : -1;
    return g;
  }
  g.vertical = false;
  g.c = (sq(p.x) + sq(p.y) - sq(q.x) - sq(q.y)) / (2.0 * (p.x - q.x));
  g.r = std::hypot(p.x - g.c, p.y);
  g.orient = +1;
  if (geodesic_coordinate(g, q) < geodesic_coordinate(g, p)) g.orient = -1;
  return g;
}

H2Geodesic geodesic_with_tangent(const H2Point& p, double tx, double ty) {
  double n = std::hypot(tx, ty);
  tx /= n;
  ty /= n;
  H2Geodesic g;
  if (std::abs(tx) < 1e-12) {
    g.vertical = true;
    g.c = p.x;
    g.orient = ty > 0 ? +1 : -1;
    return g;
  }
  // Circle center on the real axis with radius vector orthogonal to (tx, ty).
  g.vertical = false;
  g.c = p.x + p.y * ty / tx;
  g.r = std::hypot(p.x - g.c, p.y);
  double th = std::atan2(p.y, p.x - g.c);
  // Canonical direction at p is (-sin th, cos th); match requested tangent.
  g.orient = (tx * (-std::sin(th)) + ty * std::cos(th)) > 0 ? +1 : -1;
  return g;
}

std::optional<H2Point> geodesic_intersection(const H2Geodesic& g1, const H2Geodesic& g2) {
  if (g1.vertical && g2.vertical) return std::nullopt;
  if (g1.vertical || g2.vertical) {
    const H2Geodesic& v = g1.vertical ? g1 : g2;
    const H2Geodesic& c = g1.vertical ? g2 : g1;
    double dy2 = sq(c.r) - sq(v.c - c.c);
    if (dy2 <= 0) return std::nullopt;
    return H2Point{v.c, std::sqrt(dy2)};
  }
  if (std::abs(g1.c - g2.c) < 1e-300) return std::nullopt;
  double x = (sq(g1.r) - sq(g2.r) - sq(g1.c) + sq(g2.c)) / (2.0 * (g2.c - g1.c));
  double dy2 = sq(g1.r) - sq(x - g1.c);
  if (dy2 <= 0) return std::nullopt;
  return H2Point{x, std::sqrt(dy2)};
}

bool same_geodesic(const H2Geodesic& g1, const H2Geodesic& g2, double tol) {
  if (g1.vertical != g2.vertical) return false;
  if (g1.vertical) return std::abs(g1.c - g2.c) < tol;
  return std::abs(g1.c - g2.c) < tol && std::abs(g1.r - g2.r) < tol;
}

PointToGeodesic dist_point_geodesic(const H2Point& p, const H2Geodesic& g) {
  if (g.vertical) {
    double d = std::asinh(std::abs(p.x - g.c) / p.y);
    double rad = std::hypot(p.x - g.c, p.y);
    return {d, H2Point{g.c, rad}};
  }
  // Send the half-circle to the y-axis by w = (u - r)/(u + r), u = z - c.
  Cx u = p.cx() - Cx{g.c, 0.0};
  Cx w = (u - g.r) / (u + g.r);
  double d = std::asinh(std::abs(w.real()) / w.imag());
  Cx foot_w{0.0, std::abs(w)};
  Cx foot_u = g.r * (1.0 + foot_w) / (1.0 - foot_w);
  return {d, H2Point::from(foot_u + Cx{g.c, 0.0})};
}

CommonPerpendicular common_perpendicular(const H2Geodesic& g1, const H2Geodesic& g2) {
  if (same_geodesic(g1, g2))
    fail(ErrorCode::IntersectingOrAsymptotic, "identical geodesics");
  Motion n = normalize_to_axis(g1);
  H2Geodesic h = apply(n, g2);
  if (h.vertical)
    fail(ErrorCode::IntersectingOrAsymptotic, "geodesics share the ideal point at infinity");
  if (std::abs(h.c) <= h.r * (1.0 + 1e-14))
    fail(ErrorCode::IntersectingOrAsymptotic, "geodesics meet or are asymptotic");

  double rho = std::sqrt(sq(h.c) - sq(h.r));
  H2Geodesic perp{false, 0.0, rho, +1};
  H2Point f1{0.0, rho};
  double x = (sq(rho) + sq(h.c) - sq(h.r)) / (2.0 * h.c);
  double y2 = sq(rho) - sq(x);
  if (y2 <= 0) fail(ErrorCode::IntersectingOrAsymptotic, "degenerate perpendicular foot");
  H2Point f2{x, std::sqrt(y2)};

  Motion back = inverse(n);
  CommonPerpendicular out;
  out.foot1 = apply(back, f1);
  out.foot2 = apply(back, f2);
  out.geodesic = apply(back, perp);
  out.length = dist(out.foot1, out.foot2);
  return out;
}

H2Geodesic bisector(const H2Geodesic& g1, const H2Geodesic& g2) {
  CommonPerpendicular cp = common_perpendicular(g1, g2);
  double t1 = geodesic_coordinate(cp.geodesic, cp.foot1);
  double t2 = geodesic_coordinate(cp.geodesic, cp.foot2);
  double tm = 0.5 * (t1 + t2);
  H2Point m = geodesic_point(cp.geodesic, tm);
  auto tan = geodesic_tangent(cp.geodesic, tm);
  // Rotate the tangent a quarter turn; conformal model, so Euclidean rotation.
  return geodesic_with_tangent(m, -tan[1], tan[0]);
}

Equidistant equidistant_point(const H2Geodesic& g1, const H2Geodesic& g2,
                              const H2Geodesic& g3) {
  if (same_geodesic(g1, g2) || same_geodesic(g2, g3) || same_geodesic(g1, g3))
    fail(ErrorCode::NoSolution, "geodesics not pairwise distinct");

  const H2Geodesic* gs[3] = {&g1, &g2, &g3};
  auto residual = [&](const H2Point& p, double out[2]) {
    double d1 = dist_point_geodesic(p, *gs[0]).dist;
    double d2 = dist_point_geodesic(p, *gs[1]).dist;
    double d3 = dist_point_geodesic(p, *gs[2]).dist;
    out[0] = d1 - d3;
    out[1] = d2 - d3;
    return std::abs(out[0]) + std::abs(out[1]);
  };

  H2Point p;
  bool seeded = false;
  H2Geodesic b12;
  try {
    b12 = bisector(g1, g2);
    H2Geodesic b13 = bisector(g1, g3);
    auto hit = geodesic_intersection(b12, b13);
    if (hit) {
      p = *hit;
      seeded = true;
    }
  } catch (const Error&) {
    fail(ErrorCode::NoSolution, "input geodesics intersect or are asymptotic");
  }

  if (!seeded) {
    // Bracketing fallback: walk the (g1, g2) bisector until d1 - d3 changes sign.
    double lo = 0.0, hi = 0.0;
    bool found = false;
    double prev_t = -20.0;
    double r0[2];
    residual(geodesic_point(b12, prev_t), r0);
    double prev = r0[0];
    for (double t = -19.5; t <= 20.0 && !found; t += 0.5) {
      double rr[2];
      residual(geodesic_point(b12, t), rr);
      if (prev * rr[0] <= 0.0) {
        lo = prev_t;
        hi = t;
        found = true;
      }
      prev = rr[0];
      prev_t = t;
    }
    if (!found) fail(ErrorCode::NoSolution, "no equidistant point on the bisector");
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      double rl[2], rm[2];
      residual(geodesic_point(b12, lo), rl);
      residual(geodesic_point(b12, mid), rm);
      if (rl[0] * rm[0] <= 0.0)
        hi = mid;
      else
        lo = mid;
    }
    p = geodesic_point(b12, 0.5 * (lo + hi));
  }

  // Damped Newton on (d1 - d3, d2 - d3) with a finite-difference Jacobian.
  double f[2];
  double fn = residual(p, f);
  for (int it = 0; it < 200 && fn > 1e-13; ++it) {
    double h = 1e-7 * p.y;
    double fx[2], fy[2];
    residual(H2Point{p.x + h, p.y}, fx);
    residual(H2Point{p.x, p.y + h}, fy);
    double j11 = (fx[0] - f[0]) / h, j12 = (fy[0] - f[0]) / h;
    double j21 = (fx[1] - f[1]) / h, j22 = (fy[1] - f[1]) / h;
    double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) break;
    double dx = -(j22 * f[0] - j12 * f[1]) / det;
    double dy = -(-j21 * f[0] + j11 * f[1]) / det;
    double step = 1.0;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      H2Point cand{p.x + step * dx, p.y + step * dy};
      if (cand.y <= 0) continue;
      double fc[2];
      double fcn = residual(cand, fc);
      if (fcn < fn) {
        p = cand;
        f[0] = fc[0];
        f[1] = fc[1];
        fn = fcn;
        break;
      }
    }
  }

  double d1 = dist_point_geodesic(p, g1).dist;
  double d2 = dist_point_geodesic(p, g2).dist;
  double d3 = dist_point_geodesic(p, g3).dist;
  double r = (d1 + d2 + d3) / 3.0;
  if (std::abs(d1 - r) > 1e-9 || std::abs(d2 - r) > 1e-9 || std::abs(d3 - r) > 1e-9)
    fail(ErrorCode::NoSolution, "equidistant refinement did not converge");
  return {p, r};
}

namespace {

double seam_length(double a_opp, double a_i, double a_j) {
  double ch = (std::cosh(a_opp) + std::cosh(a_i) * std::cosh(a_j)) /
              (std::sinh(a_i) * std::sinh(a_j));
  return std::acosh(ch);
}

// The frame walk multiplies matrices with entries up to e^{len/2}; extended
// precision keeps the closure residual small for long sides.
struct Frame {
  long double a = 1, b = 0, c = 0, d = 1;
  Frame mul(const Frame& g) const {
    return {a * g.a + b * g.c, a * g.b + b * g.d, c * g.a + d * g.c, c * g.b + d * g.d};
  }
  H2Point at_i() const {
    std::complex<long double> z{0.0L, 1.0L};
    std::complex<long double> w = (a * z + b) / (c * z + d);
    return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
  }
};

Frame axis_translation(long double t) {
  return {std::exp(t / 2), 0.0L, 0.0L, std::exp(-t / 2)};
}

Frame rotation_about_i(long double phi) {
  return {std::cos(phi / 2), std::sin(phi / 2), -std::sin(phi / 2), std::cos(phi / 2)};
}

Hexagon walk_hexagon(const std::array<double, 6>& len, double turn) {
  Hexagon hx;
  hx.side_len = len;
  Frame f;
  for (int k = 0; k < 6; ++k) {
    hx.v[k] = f.at_i();
    f = f.mul(axis_translation(len[k]));
    f = f.mul(rotation_about_i(turn));
  }
  hx.closure = dist(f.at_i(), hx.v[0]);
  for (int k = 0; k < 6; ++k) hx.side[k] = geodesic_through(hx.v[k], hx.v[(k + 1) % 6]);
  return hx;
}

}  // namespace

Hexagon right_hexagon(double a1, double a2, double a3) {
  if (a1 <= 0 || a2 <= 0 || a3 <= 0)
    fail(ErrorCode::ContractViolation, "hexagon sides must be positive");
  double s12 = seam_length(a3, a1, a2);
  double s23 = seam_length(a1, a2, a3);
  double s31 = seam_length(a2, a3, a1);
  std::array<double, 6> len{a1, s12, a2, s23, a3, s31};
  Hexagon plus = walk_hexagon(len, M_PI / 2);
  Hexagon minus = walk_hexagon(len, -M_PI / 2);
  Hexagon& best = plus.closure <= minus.closure ? plus : minus;
  if (best.closure > 1e-9 * (1.0 + a1 + a2 + a3))
    fail(ErrorCode::ContractViolation, "hexagon walk failed to close");
  return best;
}

namespace {

// One strip fiber: the perpendicular to the (normalized) y-axis at height e^t
// is the half-circle |z| = e^t.  Returns cot(theta) at its crossing with l,
// which equals sinh of the fiber length between axis and l.
double strip_cot(const H2Geodesic& l, double t) {
  double rho = std::exp(t);
  double x, y2;
  if (l.vertical) {
    x = l.c;
    y2 = sq(rho) - sq(x);
  } else {
    x = (sq(rho) + sq(l.c) - sq(l.r)) / (2.0 * l.c);
    y2 = sq(rho) - sq(x);
  }
  if (y2 <= 0.0 || x <= 0.0)
    fail(ErrorCode::InvalidRegion, "perpendicular leaves the strip before reaching l");
  return x / std::sqrt(y2);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

TrapeziumCheck trapezium_area_check(const H2Geodesic& r, const H2Geodesic& l, double t0,
                                    double delta) {
  if (delta <= 0) fail(ErrorCode::InvalidRegion, "delta must be positive");
  if (same_geodesic(r, l)) fail(ErrorCode::InvalidRegion, "r and l coincide");
  if (geodesic_intersection(r, l)) fail(ErrorCode::InvalidRegion, "r and l cross");

  Motion n = normalize_to_axis(r);
  H2Geodesic lh = apply(n, l);
  // Put l on the positive-x side of the axis.
  double side = lh.vertical ? lh.c : lh.c;
  if (side < 0) {
    Motion flip{-1.0, 0.0, 0.0, 1.0, true};  // z -> -conj z, fixes the y-axis
    lh = apply(flip, lh);
  }
  if (!lh.vertical && std::abs(lh.c) <= lh.r)
    fail(ErrorCode::InvalidRegion, "l crosses r");

  // Parameter of r(t0) on the normalized axis.
  H2Point p0 = apply(n, geodesic_point(r, t0));
  double tc = std::log(p0.y);

  // Fiber coordinates (t, theta): z = e^t e^{i theta},  dA = dt dtheta / sin^2.
  // The inner integral in theta is evaluated in closed form (cot theta_l); the
  // outer integral is adaptive Simpson to 1e-8.
  TrapeziumCheck out;
  auto f = [&](double t) { return strip_cot(lh, t); };
  double cot0 = strip_cot(lh, tc);
  out.h0 = std::asinh(cot0);
  out.area = integrate(f, tc - delta, tc + delta, 1e-8);
  out.bound = 2.0 * delta * out.h0;
  out.margin = out.area - out.bound;
  return out;
}

}  // namespace grafting
