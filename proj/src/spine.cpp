#include "grafting/spine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "grafting/errors.hpp"

namespace grafting {

namespace {

std::string msg(const char* fmt, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// Signed circular difference a - b folded into [-m/2, m/2).
double circ_sdiff(double a, double b, double m) {
  return wrap_mod(a - b + m / 2, m) - m / 2;
}

double circ_dist(double a, double b, double m) { return std::fabs(circ_sdiff(a, b, m)); }

int seam_between(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return 0;
  if (i == 1 && j == 2) return 1;
  return 2;  // {0, 2}
}

// Coordinate of the seam-to-j foot on boundary i: one of the two feet 0, len/2.
double foot_center(const PantsGeometry& pg, int i, int j) {
  if (pg.other_at_origin(i) == j) return 0.0;
  if (pg.other_at_half(i) != j) fail(ErrorCode::ContractViolation, "seam foot lookup out of range");
  return pg.boundary_len[i] / 2;
}

H2Point seam_midpoint(const PantsGeometry& pg, int m) {
  const H2Point& a = pg.hex.v[2 * m + 1];
  const H2Point& b = pg.hex.v[(2 * m + 2) % 6];
  double ta = geodesic_coordinate(pg.seam[m], a);
  double tb = geodesic_coordinate(pg.seam[m], b);
  return geodesic_point(pg.seam[m], (ta + tb) / 2);
}

SpineEdgeArc edge_between(const H2Geodesic& g, const H2Point& p, const H2Point& q) {
  double tp = geodesic_coordinate(g, p);
  double tq = geodesic_coordinate(g, q);
  return SpineEdgeArc{g, std::min(tp, tq), std::max(tp, tq)};
}

double arc_dist(const SpineEdgeArc& e, const H2Point& z) {
  PointToGeodesic pd = dist_point_geodesic(z, e.geo);
  double t = geodesic_coordinate(e.geo, pd.foot);
  if (t < e.t0) return dist(z, geodesic_point(e.geo, e.t0));
  if (t > e.t1) return dist(z, geodesic_point(e.geo, e.t1));
  return pd.dist;
}

void check_on(const H2Point& p, const H2Geodesic& g, const char* what) {
  double d = dist_point_geodesic(p, g).dist;
  if (d > 1e-7)
    fail(ErrorCode::ContractViolation,
         (std::string(what) + msg(" misses its geodesic by %g", d)).c_str());
}

}  // namespace

namespace {

// Cyclic per-boundary view of the pairing data, sorted around each circle.
void fill_boundary_arcs(RibbonSpine& sp, const std::array<double, 3>& len) {
  for (int i = 0; i < 3; ++i) sp.boundary_arcs[i].clear();
  for (int e = 0; e < (int)sp.arcs.size(); ++e) {
    const SpineArc& a = sp.arcs[e];
    sp.boundary_arcs[a.slot_a].push_back({e, a.width, wrap_mod(a.center_a, len[a.slot_a])});
    sp.boundary_arcs[a.slot_b].push_back({e, a.width, wrap_mod(a.center_b, len[a.slot_b])});
  }
  for (int i = 0; i < 3; ++i) {
    std::sort(sp.boundary_arcs[i].begin(), sp.boundary_arcs[i].end(),
              [](const RibbonSpine::BoundaryArc& x, const RibbonSpine::BoundaryArc& y) {
                return x.center < y.center;
              });
    double sum = 0;
    for (const RibbonSpine::BoundaryArc& b : sp.boundary_arcs[i]) sum += b.length;
    if (std::fabs(sum - len[i]) > 1e-9 * (1 + len[i]))
      fail(ErrorCode::ContractViolation,
           msg("boundary arcs sum to %g, expected %g", sum, len[i]).c_str());
  }
}

}  // namespace

RibbonSpine pants_spine(const PantsGeometry& pg) {
  const std::array<double, 3>& l = pg.boundary_len;
  double total = l[0] + l[1] + l[2];
  int fat = -1;
  bool degenerate = false;
  for (int k = 0; k < 3; ++k) {
    double excess = l[k] - l[(k + 1) % 3] - l[(k + 2) % 3];
    if (std::fabs(excess) <= 1e-12 * total) {
      degenerate = true;
      fat = k;
    } else if (excess > 0) {
      fat = k;
    }
  }

  RibbonSpine sp;
  if (fat < 0) {
    sp.kind = RibbonSpine::Kind::Theta;
    Equidistant eq = equidistant_point(pg.G[0], pg.G[1], pg.G[2]);
    sp.inradius = eq.r;
    sp.corners = {eq.point};
    for (int m = 0; m < 3; ++m) {
      int i = m, j = (m + 1) % 3, k = (m + 2) % 3;
      double w = (l[i] + l[j] - l[k]) / 2;
      sp.arcs.push_back({i, foot_center(pg, i, j), j, foot_center(pg, j, i), w});
      H2Geodesic bis = bisector(pg.G[i], pg.G[j]);
      H2Point mid = seam_midpoint(pg, m);
      check_on(eq.point, bis, "theta vertex");
      check_on(mid, bis, "seam midpoint");
      sp.edges.push_back(edge_between(bis, eq.point, mid));
    }
  } else {
    sp.kind = degenerate ? RibbonSpine::Kind::FigureEight : RibbonSpine::Kind::Dumbbell;
    sp.long_index = fat;
    int i = (fat + 1) % 3, j = (fat + 2) % 3;
    if (i > j) std::swap(i, j);
    int k = fat;
    H2Geodesic b_ik = bisector(pg.G[i], pg.G[k]);
    H2Geodesic b_jk = bisector(pg.G[j], pg.G[k]);
    const H2Geodesic& s_ij = pg.seam[seam_between(i, j)];
    const H2Geodesic& s_ik = pg.seam[seam_between(i, k)];
    const H2Geodesic& s_jk = pg.seam[seam_between(j, k)];
    auto meet = [](const H2Geodesic& g1, const H2Geodesic& g2) {
      std::optional<H2Point> p = geodesic_intersection(g1, g2);
      if (!p) fail(ErrorCode::ContractViolation, "dumbbell corner misses its seam");
      return *p;
    };
    H2Point ui = meet(s_ij, b_ik);
    H2Point uj = meet(s_ij, b_jk);
    H2Point wi = meet(s_ik, b_ik);
    H2Point wj = meet(s_jk, b_jk);
    sp.corners = {ui, uj, wi, wj};
    double inr = 0;
    auto corner_radius = [&](const H2Point& p, int b1, int b2) {
      double d1 = dist_point_geodesic(p, pg.G[b1]).dist;
      double d2 = dist_point_geodesic(p, pg.G[b2]).dist;
      if (std::fabs(d1 - d2) > 1e-7)
        fail(ErrorCode::ContractViolation,
             msg("dumbbell corner radii disagree: %g vs %g", d1, d2).c_str());
      inr = std::max(inr, (d1 + d2) / 2);
    };
    corner_radius(ui, i, k);
    corner_radius(uj, j, k);
    corner_radius(wi, i, k);
    corner_radius(wj, j, k);
    sp.inradius = inr;

    double c_ik = foot_center(pg, i, k), c_ki = foot_center(pg, k, i);
    double c_jk = foot_center(pg, j, k), c_kj = foot_center(pg, k, j);
    if (circ_dist(c_ki, c_kj, l[k]) < l[k] / 4)
      fail(ErrorCode::ContractViolation, "feet on the long boundary coincide");
    sp.arcs.push_back({i, c_ik, k, c_ki, l[i]});
    sp.arcs.push_back({j, c_jk, k, c_kj, l[j]});
    double bar = degenerate ? 0.0 : (l[k] - l[i] - l[j]) / 2;
    double g1 = wrap_mod(c_ki + l[i] / 2 + bar / 2, l[k]);
    double g2 = wrap_mod(c_kj + l[j] / 2 + bar / 2, l[k]);
    if (circ_dist(g2, -g1, l[k]) > 1e-9 * (1 + l[k]))
      fail(ErrorCode::ContractViolation, "bar arcs are not mirror images");
    sp.arcs.push_back({k, g1, k, g2, bar});

    sp.edges.push_back(edge_between(s_ij, ui, uj));
    sp.edges.push_back(edge_between(b_ik, ui, wi));
    sp.edges.push_back(edge_between(b_jk, uj, wj));
  }
  fill_boundary_arcs(sp, l);
  return sp;
}

RibbonSpine pants_spine(double l1, double l2, double l3) {
  return pants_spine(build_pants(l1, l2, l3));
}

double pants_inradius(const PantsGeometry& pg) { return pants_spine(pg).inradius; }

double pants_inradius(double l1, double l2, double l3) {
  return pants_spine(build_pants(l1, l2, l3)).inradius;
}

namespace {

// Per-slot view of an arc pairing: s = center + t maps to partner_center - t
// on partner_slot.
struct SlotArc {
  double center;
  double width;
  int partner_slot;
  double partner_center;
};

std::array<std::vector<SlotArc>, 3> slot_arcs(const RibbonSpine& sp) {
  std::array<std::vector<SlotArc>, 3> out;
  for (const SpineArc& a : sp.arcs) {
    out[a.slot_a].push_back({a.center_a, a.width, a.slot_b, a.center_b});
    out[a.slot_b].push_back({a.center_b, a.width, a.slot_a, a.center_a});
  }
  return out;
}

}  // namespace

std::array<std::vector<double>, 3> slot_cuts(const RibbonSpine& sp,
                                             const std::array<double, 3>& len) {
  std::array<std::vector<SlotArc>, 3> per = slot_arcs(sp);
  std::array<std::vector<double>, 3> out;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> cuts;
    for (const SlotArc& a : per[i]) {
      cuts.push_back(wrap_mod(a.center - a.width / 2, len[i]));
      cuts.push_back(wrap_mod(a.center + a.width / 2, len[i]));
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double c : cuts) {
      if (uniq.empty() || circ_dist(c, uniq.back(), len[i]) > 1e-9 * (1 + len[i]))
        uniq.push_back(c);
    }
    if (uniq.size() > 1 && circ_dist(uniq.front(), uniq.back(), len[i]) <= 1e-9 * (1 + len[i]))
      uniq.pop_back();
    out[i] = uniq;
  }
  return out;
}

namespace {

struct LiftRef {
  int boundary;
  int index;
};

struct RidgeSample {
  H2Point point;
  double height;
  LiftRef partner;
  double partner_coord;
};

class RidgeTracer {
 public:
  RidgeTracer(const PantsGeometry& pg, double inradius) : pg_(pg), inradius_(inradius) {}

  RidgeSample trace(int i, double s) const {
    H2Point b = pg_.boundary_point(i, s);
    int base = base_lift(i, b);
    double li = pg_.boundary_len[i];
    double h = 1e-6 * (1 + li);
    H2Point bp = pg_.boundary_point(i, wrap_mod(s + h, li));
    H2Point bm = pg_.boundary_point(i, wrap_mod(s - h, li));
    double tx = bp.x - bm.x, ty = bp.y - bm.y;
    double tn = std::hypot(tx, ty);
    if (tn < 1e-14) fail(ErrorCode::ContractViolation, "degenerate boundary tangent");
    tx /= tn;
    ty /= tn;
    H2Geodesic perp = geodesic_with_tangent(b, -ty, tx);
    double tb = geodesic_coordinate(perp, b);
    const H2Geodesic& own_geo = pg_.lifts(i)[base].geo;

    auto at = [&](double t) { return geodesic_point(perp, tb + t); };
    auto gap = [&](double t) {
      H2Point z = at(t);
      double own = dist_point_geodesic(z, own_geo).dist;
      return competitor(z, i, base).first - own;
    };

    double step = std::min(0.05, inradius_ / 4);
    double cap = inradius_ + 1.0;
    double lo = 0, hi = step;
    double first = gap(1e-9);
    if (first < 0)
      fail(ErrorCode::ContractViolation, msg("boundary sample at s=%g starts past the ridge", s).c_str());
    while (gap(hi) > 0) {
      lo = hi;
      hi += step;
      if (hi > cap)
        fail(ErrorCode::ContractViolation,
             msg("no ridge within %g inward of boundary sample", cap).c_str());
    }
    for (int it = 0; it < 60; ++it) {
      double mid = (lo + hi) / 2;
      (gap(mid) > 0 ? lo : hi) = mid;
    }
    double t_star = (lo + hi) / 2;
    H2Point z = at(t_star);
    std::pair<double, LiftRef> comp = competitor(z, i, base);
    const BoundaryLift& pl = pg_.lifts(comp.second.boundary)[comp.second.index];
    H2Point foot = dist_point_geodesic(z, pl.geo).foot;
    double pc = pg_.boundary_coordinate(comp.second.boundary, foot, pl.word_inv);
    return RidgeSample{z, t_star, comp.second, pc};
  }

 private:
  int base_lift(int i, const H2Point& b) const {
    const std::vector<BoundaryLift>& ls = pg_.lifts(i);
    int best = -1;
    double bd = 1e300;
    for (int n = 0; n < (int)ls.size(); ++n) {
      double d = dist_point_geodesic(b, ls[n].geo).dist;
      if (d < bd) {
        bd = d;
        best = n;
      }
    }
    if (bd > 1e-8)
      fail(ErrorCode::ContractViolation,
           msg("boundary point off its own lift by %g", bd).c_str());
    return best;
  }

  std::pair<double, LiftRef> competitor(const H2Point& z, int own_boundary, int own_index) const {
    double best = 1e300;
    LiftRef ref{-1, -1};
    for (int j = 0; j < 3; ++j) {
      const std::vector<BoundaryLift>& ls = pg_.lifts(j);
      for (int n = 0; n < (int)ls.size(); ++n) {
        if (j == own_boundary && n == own_index) continue;
        double d = dist_point_geodesic(z, ls[n].geo).dist;
        if (d < best) {
          best = d;
          ref = {j, n};
        }
      }
    }
    if (dist(pg_.ref, z) + best > pg_.lift_radius() + 1e-6)
      fail(ErrorCode::ContractViolation, "ridge probe left the certified lift radius");
    return {best, ref};
  }

  const PantsGeometry& pg_;
  double inradius_;
};

}  // namespace

SpineCheckRow verify_spine(const PantsGeometry& pg, const RibbonSpine& sp, double grid_step) {
  if (!(grid_step > 0)) fail(ErrorCode::ConfigError, "grid step must be positive");
  RidgeTracer tracer(pg, sp.inradius);
  Motion flip = pg.copy1();
  std::array<std::vector<SlotArc>, 3> per = slot_arcs(sp);

  auto spine_dev = [&](const H2Point& z) {
    double best = 1e300;
    H2Point zf = apply(flip, z);
    for (const SpineEdgeArc& e : sp.edges)
      best = std::min(best, std::min(arc_dist(e, z), arc_dist(e, zf)));
    return best;
  };

  // Predicted arc holding s, by deepest containment.
  auto locate = [&](int i, double s) -> const SlotArc& {
    const std::vector<SlotArc>& as = per[i];
    int best = 0;
    double margin = -1e300;
    for (int n = 0; n < (int)as.size(); ++n) {
      double m = as[n].width / 2 - circ_dist(s, as[n].center, pg.boundary_len[i]);
      if (m > margin) {
        margin = m;
        best = n;
      }
    }
    return as[best];
  };

  auto endpoint_dist = [&](int i, double s) {
    double best = 1e300;
    for (const SlotArc& a : per[i]) {
      double li = pg.boundary_len[i];
      best = std::min(best, circ_dist(s, wrap_mod(a.center - a.width / 2, li), li));
      best = std::min(best, circ_dist(s, wrap_mod(a.center + a.width / 2, li), li));
    }
    return best;
  };

  SpineCheckRow row{grid_step, 0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    double li = pg.boundary_len[i];
    int n = std::max(4, (int)std::ceil(li / grid_step));
    double h = li / n;
    std::vector<double> ss(n);
    std::vector<RidgeSample> rs(n);
    for (int m = 0; m < n; ++m) {
      ss[m] = wrap_mod((m + 0.31830988618379) * h, li);
      rs[m] = tracer.trace(i, ss[m]);
      row.max_ridge_dev = std::max(row.max_ridge_dev, spine_dev(rs[m].point));
      double ed = endpoint_dist(i, ss[m]);
      const SlotArc& a = locate(i, ss[m]);
      if (ed > h / 4) {
        if (rs[m].partner.boundary != a.partner_slot) {
          row.max_arc_dev = std::max(row.max_arc_dev, ed);
        } else {
          double off = circ_sdiff(ss[m], a.center, li);
          double pred = wrap_mod(a.partner_center - off, pg.boundary_len[a.partner_slot]);
          row.max_arc_dev = std::max(
              row.max_arc_dev,
              circ_dist(rs[m].partner_coord, pred, pg.boundary_len[a.partner_slot]));
        }
      }
    }
    // Refine every change of partner slot to a measured transition coordinate.
    for (int m = 0; m < n; ++m) {
      int m2 = (m + 1) % n;
      if (rs[m].partner.boundary == rs[m2].partner.boundary) continue;
      double lo = ss[m], hi = ss[m] + h;
      int side_lo = rs[m].partner.boundary;
      RidgeSample last_lo = rs[m], last_hi = rs[m2];
      for (int it = 0; it < 40; ++it) {
        double mid = (lo + hi) / 2;
        RidgeSample rm = tracer.trace(i, wrap_mod(mid, li));
        if (rm.partner.boundary == side_lo) {
          lo = mid;
          last_lo = rm;
        } else {
          hi = mid;
          last_hi = rm;
        }
      }
      row.max_transition_jump =
          std::max(row.max_transition_jump, std::fabs(last_lo.height - last_hi.height));
      row.max_arc_dev =
          std::max(row.max_arc_dev, endpoint_dist(i, wrap_mod((lo + hi) / 2, li)));
    }
  }
  return row;
}

}  // namespace grafting
