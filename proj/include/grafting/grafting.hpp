#pragma once

#include <vector>

#include "grafting/pants.hpp"
#include "grafting/rng.hpp"

namespace grafting {

// Cylinder heights a_e >= 0 per decomposition curve; the support is where
// a_e > 0.  The all-zero vector is the zero lamination.
struct WeightedMulticurve {
  std::vector<double> weights;

  static WeightedMulticurve zero(int num_curves) {
    return {std::vector<double>(num_curves, 0.0)};
  }
  bool supported(int e) const { return weights[e] > 0; }
  int support_size() const {
    int n = 0;
    for (double w : weights)
      if (w > 0) ++n;
    return n;
  }
};

// Flat cylinder inserted along one supported curve.  Dimensions include the
// complex's scale factor.
struct FlatCylinder {
  int curve = -1;
  double circumference = 0;
  double height = 0;
};

// Point of a grafted surface.  Hyperbolic points carry their pants id and a
// position in its fundamental domain (unit-curvature coordinates; the global
// scale enters distances only).  Cylinder coordinates (u, v) are in scaled
// length units: u runs around the circumference, v across the height, v = 0
// on the side-0 rim of the curve.
struct SurfacePoint {
  enum class Kind { Hyperbolic, Cylinder };
  Kind kind = Kind::Hyperbolic;
  int piece = -1;  // hyperbolic piece id, or cylinder index
  int pants = -1;
  H2Point z;
  double u = 0;
  double v = 0;

  static SurfacePoint hyperbolic(int piece, int pants, const H2Point& z) {
    SurfacePoint p;
    p.kind = Kind::Hyperbolic;
    p.piece = piece;
    p.pants = pants;
    p.z = z;
    return p;
  }
  static SurfacePoint cylinder(int cyl, double u, double v) {
    SurfacePoint p;
    p.kind = Kind::Cylinder;
    p.piece = cyl;
    p.u = u;
    p.v = v;
    return p;
  }
};

// Hyperbolic surface with flat cylinders inserted along the supported curves.
// The hyperbolic pieces are the components the pants fall into once the
// supported curves are cut open; unweighted curves stay interior gluings.
struct GraftedComplex {
  SurfaceGeometry geom;
  WeightedMulticurve mu;
  double scale = 1;
  std::vector<FlatCylinder> cylinders;
  std::vector<int> cylinder_of_curve;    // curve -> cylinder index, -1 if unweighted
  std::vector<int> piece_of_pants;       // pants -> hyperbolic piece id
  std::vector<std::vector<int>> pieces;  // piece id -> pants in it

  int num_pieces() const { return (int)pieces.size(); }
  int num_cylinders() const { return (int)cylinders.size(); }
};

GraftedComplex graft(const FNSurface& fn, const WeightedMulticurve& mu);

// Total area summed from the parts: 2 pi per pants plus circumference x height
// per cylinder, all carrying scale^2.
double area(const GraftedComplex& g);

// Sum of a_e l_e over the support (unscaled FN lengths).
double length_of_lamination(const FNSurface& fn, const WeightedMulticurve& mu);

// Collapsing map onto the underlying hyperbolic surface: identity on
// hyperbolic points, cylinder points land on the curve circle at the same u.
// The result is a point of graft(fn, 0), whose single piece has id 0.
SurfacePoint collapse(const GraftedComplex& g, const SurfacePoint& p);

GraftedComplex rescale(const GraftedComplex& g, double k);

// Rescale so the cylinders carry unit total area: k = (sum a_e l_e)^{-1/2}.
GraftedComplex normalize_flat_unit(const GraftedComplex& g);

// Uniform random point, pieces weighted by area.
SurfacePoint sample_point(const GraftedComplex& g, Rng& rng);

}  // namespace grafting
