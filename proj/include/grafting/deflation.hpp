#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "grafting/grafting.hpp"
#include "grafting/net.hpp"
#include "grafting/spine.hpp"

namespace grafting {

// One boundary arc of a band on a cylinder rim circle.  The band parameter t
// spans [-length/2, length/2]; the point at t sits at circle coordinate
// center + sign * t, and the partner arc carries the same t with its own sign,
// so every pairing is an isometry between the arcs.
struct FlatArc {
  int circle = -1;  // 2 * curve + rim
  double center = 0;
  double length = 0;
  int sign = 1;
  int partner = -1;
};

struct FlatCone {
  std::vector<int> cuts;  // global cut ids merged into this singularity
  double angle = 0;
};

// Half-translation surface built from flat cylinders whose rim circles are
// subdivided into paired arcs.  Cylinders are indexed by decomposition curve.
struct FlatComplex {
  int genus = 0;
  double scale = 1;
  std::vector<FlatCylinder> cylinders;
  std::vector<FlatArc> arcs;
  std::vector<std::vector<int>> circle_arcs;  // per circle, sorted by center
  std::vector<FlatCone> cones;

  double circumference(int e) const { return cylinders[e].circumference; }
  double height(int e) const { return cylinders[e].height; }
  double area() const;
};

// Deflation of a full-support grafted complex: the source, the per-pants
// spines driving the collapse, and the flat target.  Flat points reuse
// SurfacePoint with kind Cylinder and piece = curve id.
struct Deflation {
  GraftedComplex source;
  std::vector<RibbonSpine> spines;
  FlatComplex flat;
};

Deflation deflate(const GraftedComplex& g);

SurfacePoint deflate_point(const Deflation& d, const SurfacePoint& p);

// Walks the arc abutments and pairings: cut-point classes get cone angle
// pi * (class size).  Checks every arc is paired once with matching lengths,
// pairing images land on cuts, angles reach 3 pi, and the total angle excess
// is 2 pi (2g - 2).
std::vector<FlatCone> cone_audit(const FlatComplex& f);

// Net oracle over the flat complex, same contract as DistanceNet: ring arcs,
// exact cylinder chords, and hop edges across the arc pairings.
class FlatNet {
 public:
  FlatNet(FlatComplex f, double net_step, std::size_t node_cap = 60000);

  const FlatComplex& complex() const { return f_; }
  double step() const { return step_; }
  std::size_t size() const { return nodes_.size(); }

  DistanceResult query(const SurfacePoint& p, const SurfacePoint& q) const;

 private:
  struct Edge {
    int to;
    double w;
    int cross;  // curve whose core circle this edge crosses, or -1
  };
  struct Node {
    int circle;
    double u;  // scaled position on the circle
  };

  void attach(const SurfacePoint& p, std::vector<Edge>& out) const;

  FlatComplex f_;
  double step_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adj_;
  std::vector<std::vector<int>> circle_nodes_;
};

DistanceResult flat_distance(const FlatComplex& f, const SurfacePoint& p, const SurfacePoint& q,
                             double net_step);

struct DistortionRow {
  double gr_lower = 0;
  double gr_upper = 0;
  double fl_lower = 0;
  double fl_upper = 0;
  double abs_lower = 0;  // certain part of |d_flat - d_Gr|
  double abs_upper = 0;  // worst case allowed by the intervals
};

struct DistortionStats {
  double max_abs_lower = 0;
  double max_abs_upper = 0;
  double mean_abs = 0;  // midpoint average
  double surj_slack = 0;
  std::vector<DistortionRow> rows;
};

// Samples point pairs on the source, compares grafted and flat distances as
// intervals, and measures how far flat sample points sit from the image of
// the grafted samples.  Meant to run on unit-flat-area normalized data.
DistortionStats distortion_sample(const Deflation& d, int n_pairs, double net_step, Rng& rng,
                                  int jobs = 1);

// Scaled inradius of the fattest hyperbolic piece.
double slimness_check(const GraftedComplex& g);

// Text export: cylinders and arc pairings, one record per line.
void write_flat(const FlatComplex& f, std::ostream& out);

}  // namespace grafting
