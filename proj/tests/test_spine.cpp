#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "grafting/spine.hpp"

using namespace grafting;

namespace {

double cdist(double a, double b, double m) {
  double d = std::fabs(std::fmod(a - b, m));
  return std::min(d, m - d);
}

const SpineArc* find_arc(const RibbonSpine& sp, int sa, int sb) {
  for (const SpineArc& a : sp.arcs) {
    if ((a.slot_a == sa && a.slot_b == sb) || (a.slot_a == sb && a.slot_b == sa)) return &a;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("theta spine of the symmetric pants") {
  PantsGeometry pg = build_pants(2, 2, 2);
  RibbonSpine sp = pants_spine(pg);
  CHECK(sp.kind == RibbonSpine::Kind::Theta);
  CHECK(sp.arcs.size() == 3);
  CHECK(sp.edges.size() == 3);
  CHECK(sp.corners.size() == 1);

  CHECK(sp.inradius == doctest::Approx(1.047192574211635).epsilon(1e-9));

  for (const SpineArc& a : sp.arcs) {
    CHECK(a.width == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.slot_a != a.slot_b);
  }

  // Every boundary splits into two arcs with cuts at +-w/2 around the feet.
  std::array<std::vector<double>, 3> cuts = slot_cuts(sp, pg.boundary_len);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(cuts[i].size() == 2);
    CHECK(cdist(cuts[i][0], 0.5, 2.0) < 1e-9);
    CHECK(cdist(cuts[i][1], 1.5, 2.0) < 1e-9);
  }

  // The vertex projects to each boundary at an arc endpoint, offset w/2
  // from a seam foot.
  for (int i = 0; i < 3; ++i) {
    PantsGeometry::Projection pr = pg.project_to_boundary(i, sp.corners[0]);
    CHECK(pr.dist == doctest::Approx(sp.inradius).epsilon(1e-9));
    double s = pg.foot_coordinate(i, pr);
    CHECK(std::min(cdist(s, 0.5, 2.0), cdist(s, 1.5, 2.0)) < 1e-8);
  }
}

TEST_CASE("theta widths of a scalene pants") {
  PantsGeometry pg = build_pants(2.0, 2.4, 2.8);
  RibbonSpine sp = pants_spine(pg);
  REQUIRE(sp.kind == RibbonSpine::Kind::Theta);
  const SpineArc* a01 = find_arc(sp, 0, 1);
  const SpineArc* a12 = find_arc(sp, 1, 2);
  const SpineArc* a20 = find_arc(sp, 2, 0);
  REQUIRE(a01 != nullptr);
  REQUIRE(a12 != nullptr);
  REQUIRE(a20 != nullptr);
  CHECK(a01->width == doctest::Approx((2.0 + 2.4 - 2.8) / 2).epsilon(1e-12));
  CHECK(a12->width == doctest::Approx((2.4 + 2.8 - 2.0) / 2).epsilon(1e-12));
  CHECK(a20->width == doctest::Approx((2.8 + 2.0 - 2.4) / 2).epsilon(1e-12));

  // Arc widths around each boundary add back to its length.
  CHECK(a01->width + a20->width == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a01->width + a12->width == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(a12->width + a20->width == doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("measured foliation matches the theta spine") {
  for (auto [l1, l2, l3] : {std::array<double, 3>{2, 2, 2}, {2.0, 2.4, 2.8}}) {
    PantsGeometry pg = build_pants(l1, l2, l3);
    RibbonSpine sp = pants_spine(pg);
    SpineCheckRow row = verify_spine(pg, sp, 0.1);
    CHECK(row.max_ridge_dev < 1e-7);
    CHECK(row.max_arc_dev < 1e-6);
    CHECK(row.max_transition_jump < 1e-6);
  }
}

TEST_CASE("dumbbell spine when one boundary dominates") {
  PantsGeometry pg = build_pants(1, 1, 3);
  RibbonSpine sp = pants_spine(pg);
  CHECK(sp.kind == RibbonSpine::Kind::Dumbbell);
  CHECK(sp.long_index == 2);
  CHECK(sp.corners.size() == 4);
  CHECK(sp.edges.size() == 3);
  REQUIRE(sp.arcs.size() == 3);

  const SpineArc* a02 = find_arc(sp, 0, 2);
  const SpineArc* a12 = find_arc(sp, 1, 2);
  const SpineArc* bar = find_arc(sp, 2, 2);
  REQUIRE(a02 != nullptr);
  REQUIRE(a12 != nullptr);
  REQUIRE(bar != nullptr);
  CHECK(a02->width == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a12->width == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bar->width == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a02->width + a12->width + 2 * bar->width == doctest::Approx(3.0).epsilon(1e-12));

  // Short boundaries carry a single cut, the long one four.
  std::array<std::vector<double>, 3> cuts = slot_cuts(sp, pg.boundary_len);
  CHECK(cuts[0].size() == 1);
  CHECK(cuts[1].size() == 1);
  CHECK(cuts[2].size() == 4);

  SpineCheckRow row = verify_spine(pg, sp, 0.05);
  CHECK(row.max_ridge_dev < 1e-7);
  CHECK(row.max_arc_dev < 1e-6);
  CHECK(row.max_transition_jump < 1e-6);
}

TEST_CASE("figure eight spine at the critical lengths") {
  RibbonSpine sp = pants_spine(1, 1, 2);
  CHECK(sp.kind == RibbonSpine::Kind::FigureEight);
  CHECK(sp.long_index == 2);
  REQUIRE(sp.arcs.size() == 3);
  const SpineArc* bar = find_arc(sp, 2, 2);
  REQUIRE(bar != nullptr);
  CHECK(bar->width == 0.0);
  double covered = 0;
  for (const RibbonSpine::BoundaryArc& b : sp.boundary_arcs[2]) covered += b.length;
  CHECK(covered == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("inradius decreases toward the ideal limit") {
  double r2 = pants_inradius(build_pants(2, 2, 2));
  double r4 = pants_inradius(build_pants(4, 4, 4));
  double r8 = pants_inradius(build_pants(8, 8, 8));
  double r16 = pants_inradius(build_pants(16, 16, 16));
  double limit = std::atanh(0.5);
  CHECK(r2 > r4);
  CHECK(r4 > r8);
  CHECK(r8 > r16);
  CHECK(r16 > limit);
  CHECK(r16 - limit < 1e-3);
}

TEST_CASE("spine corners are equidistant cut points") {
  PantsGeometry pg = build_pants(1.2, 1.0, 2.9);
  RibbonSpine sp = pants_spine(pg);
  REQUIRE(sp.kind == RibbonSpine::Kind::Dumbbell);
  for (const H2Point& c : sp.corners) {
    PantsGeometry::NearestBoundary nb = pg.nearest_boundary(c);
    // Each corner has at least two boundary projections at the same distance.
    int ties = 0;
    for (int i = 0; i < 3; ++i) {
      PantsGeometry::Projection pr = pg.project_to_boundary(i, c);
      if (pr.dist < nb.proj.dist + 1e-7) ++ties;
    }
    CHECK(ties >= 2);
    CHECK(nb.proj.dist <= sp.inradius + 1e-9);
  }
}

TEST_CASE("thin pants spine verifies") {
  PantsGeometry pg = build_pants(0.5, 0.5, 0.5);
  RibbonSpine sp = pants_spine(pg);
  CHECK(sp.kind == RibbonSpine::Kind::Theta);
  CHECK(sp.inradius > pants_inradius(build_pants(2, 2, 2)));
  SpineCheckRow row = verify_spine(pg, sp, 0.05);
  CHECK(row.max_ridge_dev < 1e-7);
  CHECK(row.max_arc_dev < 1e-6);
}
