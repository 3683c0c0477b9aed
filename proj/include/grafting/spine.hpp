#pragma once

#include <vector>

#include "grafting/pants.hpp"

namespace grafting {

// One edge of the ribbon spine seen from the boundary circles: the arc of
// width `width` centered at center_a on boundary slot_a is identified with the
// arc centered at center_b on slot_b by the orientation-reversing map
//   s_a = center_a + t   <->   s_b = center_b - t,   |t| <= width / 2.
// A self-pair (slot_a == slot_b) is the dumbbell bar seen from both sides.
struct SpineArc {
  int slot_a;
  double center_a;
  int slot_b;
  double center_b;
  double width;
};

// Geodesic segment of the spine developed in hexagon copy 0.
struct SpineEdgeArc {
  H2Geodesic geo;
  double t0, t1;
};

struct RibbonSpine {
  enum class Kind { Theta, Dumbbell, FigureEight };
  Kind kind = Kind::Theta;
  int long_index = -1;  // dumbbell or figure eight: the dominating boundary

  std::vector<SpineArc> arcs;  // one entry per spine edge; index = edge id

  // Per-boundary cyclic subdivision induced by the foliation: which edge each
  // arc feeds, its length, and its center in the boundary arclength
  // coordinate, sorted around the circle.
  struct BoundaryArc {
    int edge;
    double length;
    double center;
  };
  std::array<std::vector<BoundaryArc>, 3> boundary_arcs;

  std::vector<H2Point> corners;     // copy-0 spine corners and seam crossings
  std::vector<SpineEdgeArc> edges;  // copy-0 geodesic arcs; the full spine is their double
  double inradius = 0;              // max over the pants of the distance to the boundary
};

// Cut locus of the boundary with its induced ribbon metric.  The spine is a
// theta graph when every boundary is shorter than the other two combined, a
// dumbbell when one dominates, and a figure eight at equality (bar width 0;
// accepted here, rejected by deflation).
RibbonSpine pants_spine(const PantsGeometry& pg);
RibbonSpine pants_spine(double l1, double l2, double l3);

double pants_inradius(const PantsGeometry& pg);
double pants_inradius(double l1, double l2, double l3);

// Sorted arc endpoints (subdivision cuts) per boundary slot, in [0, len).
std::array<std::vector<double>, 3> slot_cuts(const RibbonSpine& sp,
                                             const std::array<double, 3>& len);

// Measured check of the spine against the foliation: boundary points on an
// s-grid are pushed inward along their perpendiculars to the first point where
// another boundary lift ties (a ridge sample).  Reports the worst distance of
// ridge samples to the predicted spine segments, and the worst disagreement of
// measured arc transitions and leaf partners with the predicted arc pairing.
struct SpineCheckRow {
  double grid_step;
  double max_ridge_dev;
  double max_arc_dev;
  double max_transition_jump;  // ridge height mismatch across refined transitions
};
SpineCheckRow verify_spine(const PantsGeometry& pg, const RibbonSpine& sp, double grid_step);

}  // namespace grafting
