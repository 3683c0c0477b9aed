#pragma once

#include <array>
#include <complex>
#include <optional>

#include "grafting/errors.hpp"
#include "grafting/rng.hpp"

namespace grafting {

using Cx = std::complex<double>;

// Upper half-plane model: points (x, y) with y > 0, metric (dx^2 + dy^2) / y^2.
struct H2Point {
  double x = 0.0;
  double y = 1.0;
  Cx cx() const { return {x, y}; }
  static H2Point from(Cx z) { return {z.real(), z.imag()}; }
};

// Complete geodesic: vertical line {x = c} or half-circle centered (c, 0) with
// radius r.  orient fixes the direction of the canonical arclength
// parametrization (see geodesic_point).
struct H2Geodesic {
  bool vertical = true;
  double c = 0.0;
  double r = 1.0;
  int orient = +1;
};

// Isometry z -> (a z + b)/(c z + d) when conj == false, z -> M(conj z) when
// conj == true.  det is kept at +1 (orientation-preserving) or -1 (reversing,
// conj == true) by normalization.
struct Motion {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  bool conj = false;

  static Motion identity() { return {}; }
};

double dist(const H2Point& p, const H2Point& q);

Motion compose(const Motion& f, const Motion& g);  // f after g
Motion inverse(const Motion& m);
H2Point apply(const Motion& m, const H2Point& p);
H2Geodesic apply(const Motion& m, const H2Geodesic& g);
Motion reflection(const H2Geodesic& g);
// Motion taking g to the y-axis (endpoints to {0, inf}).
Motion normalize_to_axis(const H2Geodesic& g);
Motion random_motion(Rng& rng, double spread = 1.0);

// Canonical arclength parametrization.  Vertical, orient +1: t -> (c, e^t).
// Circle, orient +1: t -> c + r e^{i theta}, theta = 2 atan(e^t), which runs
// from the ideal endpoint c + r (t -> -inf) to c - r (t -> +inf).
H2Point geodesic_point(const H2Geodesic& g, double t);
// Inverse of geodesic_point for points on (or projected to) the geodesic.
double geodesic_coordinate(const H2Geodesic& g, const H2Point& p);
// Euclidean unit tangent of the parametrization at parameter t.
std::array<double, 2> geodesic_tangent(const H2Geodesic& g, double t);

// Geodesic through two distinct points, oriented from p toward q.
H2Geodesic geodesic_through(const H2Point& p, const H2Point& q);
// Geodesic through p with the given Euclidean tangent direction.
H2Geodesic geodesic_with_tangent(const H2Point& p, double tx, double ty);

// Transversal intersection point of two geodesics, if any.
std::optional<H2Point> geodesic_intersection(const H2Geodesic& g1, const H2Geodesic& g2);

bool same_geodesic(const H2Geodesic& g1, const H2Geodesic& g2, double tol = 1e-12);

struct PointToGeodesic {
  double dist;
  H2Point foot;
};
PointToGeodesic dist_point_geodesic(const H2Point& p, const H2Geodesic& g);

struct CommonPerpendicular {
  H2Geodesic geodesic;  // the common perpendicular itself
  H2Point foot1;        // on g1
  H2Point foot2;        // on g2
  double length;        // dist(foot1, foot2)
};
// Fails with IntersectingOrAsymptotic when the geodesics meet in H^2 or share
// an ideal endpoint.
CommonPerpendicular common_perpendicular(const H2Geodesic& g1, const H2Geodesic& g2);

// Equidistant locus of two disjoint geodesics: the geodesic orthogonal to
// their common perpendicular through its midpoint.
H2Geodesic bisector(const H2Geodesic& g1, const H2Geodesic& g2);

struct Equidistant {
  H2Point point;
  double r;
};
// Point with dist(p, g1) = dist(p, g2) = dist(p, g3).  Seeded from the
// bisector intersection, polished by damped Newton, bisection fallback along
// the first bisector.  NoSolution when no such interior point exists.
Equidistant equidistant_point(const H2Geodesic& g1, const H2Geodesic& g2, const H2Geodesic& g3);

// Right-angled hexagon with alternating side lengths (a1, s12, a2, s23, a3, s31)
// where the seams are forced by the hexagon identity
//   cosh s12 = (cosh a3 + cosh a1 cosh a2) / (sinh a1 sinh a2)   (cyclic).
// Vertices are explicit; v[0] = i and side k runs v[k] -> v[k+1].
struct Hexagon {
  std::array<double, 6> side_len;
  std::array<H2Point, 6> v;
  std::array<H2Geodesic, 6> side;
  double closure;  // dist(walk end, v[0]); construction residual
  double s12() const { return side_len[1]; }
  double s23() const { return side_len[3]; }
  double s31() const { return side_len[5]; }
};
Hexagon right_hexagon(double a1, double a2, double a3);

struct TrapeziumCheck {
  double area;    // adaptive quadrature of dx dy / y^2 over the strip region
  double h0;      // perpendicular segment length from r(t0) to l
  double bound;   // 2 * delta * h0
  double margin;  // area - bound
};
// Region bounded by r, l, and the perpendiculars to r at r(t0 +- delta).
// InvalidRegion when a perpendicular fails to reach l (or r, l cross).
TrapeziumCheck trapezium_area_check(const H2Geodesic& r, const H2Geodesic& l, double t0,
                                    double delta);

}  // namespace grafting
