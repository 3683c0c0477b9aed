#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grafting/grafting.hpp"

namespace grafting {

// Shortest segment between two boundary points of a flat cylinder, unrolled in
// the plane: du is reduced to the nearest winding before the hypotenuse.
double cylinder_chord(double circumference, double du, double dv);

struct DistanceResult {
  double lower = 0;
  double upper = 0;
  // Per decomposition curve: how often the upper-bound path crosses it
  // (cylinder traversals on weighted curves, side changes on interior ones).
  std::vector<int> crossings;
};

// Sampled metric oracle for a grafted complex.  Nodes sit at spacing
// <= net_step on every gluing circle (both rims of each cylinder, one circle
// per interior curve); edges carry exact intra-piece distances: straight
// segments inside cylinders, deck-word geodesic distances inside a pants, and
// arcs along the circles.  Node counts per circle are powers of two, so
// halving net_step refines the net in place and upper bounds never increase.
//
// Queries attach the two endpoints to the net and run Dijkstra.  The upper
// bound is the length of an actual path on the surface; the lower bound
// subtracts the refinement allowance 4 * net_step.
class DistanceNet {
 public:
  DistanceNet(GraftedComplex g, double net_step, std::size_t node_cap = 60000, int jobs = 1);

  const GraftedComplex& complex() const { return g_; }
  double step() const { return step_; }
  std::size_t size() const { return nodes_.size(); }

  // Thread-safe for concurrent callers.
  DistanceResult query(const SurfacePoint& p, const SurfacePoint& q) const;

 private:
  enum class EdgeType : std::uint8_t { Pants, CylTraverse, CylPartial, Ring };

  struct Edge {
    int to;
    double w;
    EdgeType type;
    std::uint8_t end_from;  // pants edges: curve side used at each endpoint
    std::uint8_t end_to;
    int owner;  // pants id / cylinder id / curve id
  };

  struct Node {
    int curve;
    int rim;   // 0: side-0 circle (cylinder bottom); 1: side-1 (top)
    double u;  // circle coordinate, unscaled
  };

  struct Anchor {
    int node;
    std::uint8_t end;
    H2Point z;  // developed in the owning pants
  };

  struct TempEdge {
    int node;
    double w;
    EdgeType type;
    std::uint8_t end;  // side used at the net node
    int owner = -1;    // cylinder whose core circle the chord crosses, or -1
  };

  void attach(const SurfacePoint& p, std::vector<TempEdge>& out) const;
  std::vector<int> count_crossings(const std::vector<Edge>& path) const;

  GraftedComplex g_;
  double step_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adj_;
  std::vector<std::vector<Anchor>> anchors_;    // per pants
  std::vector<std::vector<int>> circle_nodes_;  // per (curve, rim) slot: 2e + rim
};

DistanceResult grafted_distance(const GraftedComplex& g, const SurfacePoint& p,
                                const SurfacePoint& q, double net_step);

}  // namespace grafting
