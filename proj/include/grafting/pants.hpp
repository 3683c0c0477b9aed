#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <vector>

#include "grafting/hyperbolic.hpp"

namespace grafting {

// One side of a decomposition curve: which pants, which of its three boundary
// slots.  Loop curves (both sides on one pants) are allowed.
struct CurveSide {
  int pants = -1;
  int slot = -1;
};

struct PantsDecomposition {
  int genus = 2;
  std::vector<std::array<CurveSide, 2>> curves;

  int num_pants() const { return 2 * genus - 2; }
  int num_curves() const { return 3 * genus - 3; }

  // Reverse index: (pants, slot) -> (curve, end).
  struct SlotRef {
    int curve = -1;
    int end = -1;
  };
  std::vector<std::array<SlotRef, 3>> slot_map() const;

  // Counts, every slot used exactly once, gluing graph connected.
  void validate() const;

  static PantsDecomposition genus2_standard();  // two pants, three parallel curves
  static PantsDecomposition genus2_loops();     // two one-holed tori joined by a curve
  static PantsDecomposition genus3_linear();    // four pants in a chain with end loops
};

// Fenchel-Nielsen data: per-curve length and twist over a decomposition.
struct FNSurface {
  PantsDecomposition dec;
  std::vector<double> lengths;
  std::vector<double> twists;

  void validate() const;
};

double systole_lower_bound(const FNSurface& fn);

double wrap_mod(double x, double m);  // representative in [0, m)

// A lift of one boundary geodesic into the universal cover, tagged with the
// deck word that produced it.
struct BoundaryLift {
  H2Geodesic geo;
  Motion word;
  Motion word_inv;
  int boundary;
};

// Realized pair of pants: two right-angled hexagons glued across the seams.
// Copy 0 of the hexagon is hex; copy 1 embeds as r12(hex), so the fundamental
// domain F = hex  u  r12(hex) sits in H^2 with deck group <A, B> acting on the
// universal cover (A, B translate along the first two boundary geodesics).
class PantsGeometry {
 public:
  PantsGeometry() = default;

  std::array<double, 3> boundary_len;
  Hexagon hex;
  std::array<H2Geodesic, 3> G;       // boundary geodesics, oriented along the boundary
  std::array<H2Geodesic, 3> seam;    // seam[0] between b0,b1; [1] b1,b2; [2] b2,b0
  std::array<double, 3> seam_len;
  std::array<Motion, 3> seam_refl;
  std::array<double, 3> origin_t;    // parameter of the coordinate origin on G[i]
  std::array<int, 3> origin_vertex;  // hexagon vertex index of that origin
  std::array<int, 3> half_sign;      // +1 if hexagon side a_i lies in positive s from origin
  Motion A, B;                       // deck generators
  H2Point ref;                       // interior reference point
  double ref_spread = 0.0;           // max distance from ref to a hexagon vertex

  // Arclength coordinate s in [0, len_i) on boundary i; origin is the foot of
  // the seam toward the lowest-indexed other boundary, direction induced by
  // the surface orientation.  The returned point lies in F.
  H2Point boundary_point(int i, double s) const;

  // Inverse: the coordinate of a point lying on the lift word*G[i].
  double boundary_coordinate(int i, const H2Point& p, const Motion& lift_word_inv) const;

  // Seam feet coordinates on boundary i: {0, len_i / 2}; the seam at the
  // origin connects toward other_at_origin(i).
  int other_at_origin(int i) const { return i == 0 ? 1 : 0; }
  int other_at_half(int i) const { return i == 2 ? 1 : 2; }

  // Intrinsic pants distance between developed points of F: min over deck
  // words of the H^2 distance, levels grown until two successive word lengths
  // agree to 1e-9 (early_stop) and past word_bound until stable, cap 14.
  double distance(const H2Point& p, const H2Point& q, int word_bound = 8,
                  bool early_stop = true) const;

  // Distance to boundary component i over the pruned lift list.
  struct Projection {
    double dist;
    H2Point foot;
    int lift_index;
  };
  Projection project_to_boundary(int i, const H2Point& p) const;
  // Boundary arclength coordinate of a projection foot.
  double foot_coordinate(int i, const Projection& pr) const {
    return boundary_coordinate(i, pr.foot, lifts_[i][pr.lift_index].word_inv);
  }
  // Nearest boundary overall.
  struct NearestBoundary {
    int boundary;
    Projection proj;
  };
  NearestBoundary nearest_boundary(const H2Point& p) const;

  const std::vector<BoundaryLift>& lifts(int i) const { return lifts_[i]; }
  double lift_radius() const { return lift_radius_; }

  bool contains(const H2Point& p) const;  // membership in F
  H2Point sample_interior(Rng& rng) const;

  // Monte-Carlo area estimate of the pants by rejection sampling over the
  // hexagons (exact value is 2 pi).
  double area_mc(Rng& rng, int samples) const;

  Motion copy1() const { return seam_refl[0]; }  // embeds hexagon copy 1

  // Deck words grouped by length.  Not safe against concurrent growth; the
  // per-level accessor used by distance() is.
  const std::deque<std::vector<Motion>>& word_levels(int upto) const;

 private:
  friend PantsGeometry build_pants(double, double, double);

  // Lazily grown deck-word cache, shared between copies of the geometry.
  // Levels are immutable once published, so distance queries from several
  // threads only contend on the growth lock.
  struct WordCache {
    std::mutex mu;
    std::deque<std::vector<Motion>> words;       // [len] -> motions
    std::deque<std::vector<std::uint8_t>> last;  // generator tags for growth
  };

  void build_words(int upto) const;
  const std::vector<Motion>& word_level(int len) const;
  void build_lifts();
  void collect_lifts(double r_keep);
  void build_box();

  mutable std::shared_ptr<WordCache> wcache_ = std::make_shared<WordCache>();
  std::array<std::vector<BoundaryLift>, 3> lifts_;
  double lift_radius_ = 0;      // lifts complete out to this distance from ref
  std::array<double, 6> sign_;  // inside-signs of the hexagon sides at ref
  double box_[4];               // hexagon bounding box x0,x1,y0,y1
};

// Hexagon pair from boundary lengths; postconditions (seam lengths match the
// common perpendiculars, feet spacing len_i/2) are checked at build time.
PantsGeometry build_pants(double l1, double l2, double l3);

double pants_distance(const PantsGeometry& pg, const H2Point& p, const H2Point& q,
                      int word_bound = 8);

// Realized surface: each pants in its own copy of H^2, curves glued by the
// twist convention u_side0 = s,  u_side1 = twist - s  (mod length), where u is
// the curve circle coordinate and s the boundary arclength on each side.
struct SurfaceGeometry {
  FNSurface fn;
  std::vector<PantsGeometry> pants;
  std::vector<std::array<PantsDecomposition::SlotRef, 3>> slots;

  double curve_len(int e) const { return fn.lengths[e]; }
  // Boundary arclength on the given side of curve e for circle coordinate u.
  double side_coordinate(int e, int end, double u) const;
  double u_from_side(int e, int end, double s) const;
  H2Point circle_point(int e, int end, double u) const;  // developed in that side's pants
};

SurfaceGeometry build_surface(const FNSurface& fn);

}  // namespace grafting
