#include "grafting/inflation.hpp"

#include <algorithm>
#include <cmath>

#include "grafting/errors.hpp"
#include "grafting/spine.hpp"

namespace grafting {

namespace {

double circ_dist(double a, double b, double m) {
  double d = std::fabs(wrap_mod(a - b, m));
  return std::min(d, m - d);
}

}  // namespace

FlatComplex FlatSeed::unit_flat() const { return scale_flat(flat, 1 / k); }

FlatSeed seed_of(const Deflation& d) {
  FlatSeed s;
  s.flat = d.flat;
  s.dec = d.source.geom.fn.dec;
  for (const RibbonSpine& sp : d.spines) {
    int p = (int)(&sp - d.spines.data());
    for (const SpineArc& sa : sp.arcs) {
      s.arc_from.push_back({p, sa.slot_a});
      s.arc_from.push_back({p, sa.slot_b});
    }
  }
  s.k = std::sqrt(s.flat.area());
  return s;
}

FlatComplex scale_flat(const FlatComplex& f, double factor) {
  FlatComplex out = f;
  out.scale *= factor;
  for (FlatCylinder& c : out.cylinders) {
    c.circumference *= factor;
    c.height *= factor;
  }
  for (FlatArc& a : out.arcs) {
    a.center *= factor;
    a.length *= factor;
  }
  return out;
}

GraftedComplex inflate(const FlatSeed& seed) {
  seed.dec.validate();
  int nc = seed.dec.num_curves();
  int np = seed.dec.num_pants();
  if ((int)seed.flat.cylinders.size() != nc)
    fail(ErrorCode::InconsistentWidths, "cylinder count does not match the decomposition");
  if (seed.arc_from.size() != seed.flat.arcs.size())
    fail(ErrorCode::InconsistentWidths, "labelling does not cover the arcs");

  std::vector<double> lengths(nc), weights(nc);
  for (int e = 0; e < nc; ++e) {
    lengths[e] = seed.flat.circumference(e);
    weights[e] = seed.flat.height(e);
    if (!(lengths[e] > 0) || !(weights[e] > 0))
      fail(ErrorCode::InconsistentWidths, "cylinder dimensions must be positive");
  }
  std::vector<std::array<PantsDecomposition::SlotRef, 3>> slots = seed.dec.slot_map();

  // Gather each pants' arc pairs: slot pair and width, one entry per spine arc.
  struct PairObs {
    int slot_a, slot_b;
    int arc_a, arc_b;  // flat arc ids, a on slot_a
    double width;
  };
  std::vector<std::vector<PairObs>> obs(np);
  for (int a = 0; a < (int)seed.flat.arcs.size(); ++a) {
    int b = seed.flat.arcs[a].partner;
    if (b < 0 || b >= (int)seed.flat.arcs.size() || seed.flat.arcs[b].partner != a || b == a)
      fail(ErrorCode::InconsistentWidths, "arc pairing is not an involution");
    if (b < a) continue;
    if (seed.arc_from[a][0] != seed.arc_from[b][0])
      fail(ErrorCode::InconsistentWidths, "paired arcs labelled with different pants");
    if (std::fabs(seed.flat.arcs[a].length - seed.flat.arcs[b].length) >
        1e-9 * (1 + seed.flat.arcs[a].length))
      fail(ErrorCode::InconsistentWidths, "paired arcs differ in width");
    obs[seed.arc_from[a][0]].push_back({seed.arc_from[a][1], seed.arc_from[b][1], a, b,
                                        seed.flat.arcs[a].length});
  }

  // Check the widths against the linear system for the labelled type and
  // recover the twists from the arc positions.
  std::vector<double> twists(nc);
  std::vector<bool> twist_known(nc, false);
  std::vector<RibbonSpine> spines;
  for (int p = 0; p < np; ++p) {
    if (obs[p].size() != 3)
      fail(ErrorCode::InconsistentWidths, "each pants needs exactly three arc pairs");
    double l[3];
    for (int s = 0; s < 3; ++s) l[s] = lengths[slots[p][s].curve];
    double tol = 1e-9 * (1 + l[0] + l[1] + l[2]);

    const PairObs* self = nullptr;
    for (const PairObs& po : obs[p])
      if (po.slot_a == po.slot_b) self = &po;
    if (self == nullptr) {
      for (const PairObs& po : obs[p]) {
        int k = 3 - po.slot_a - po.slot_b;
        double want = (l[po.slot_a] + l[po.slot_b] - l[k]) / 2;
        if (!(want > 0) || std::fabs(po.width - want) > tol)
          fail(ErrorCode::InconsistentWidths, "widths violate the three-arc relations");
      }
    } else {
      int k = self->slot_a;
      double bar = (l[k] - (l[0] + l[1] + l[2] - l[k])) / 2;
      if (!(bar > 0) || std::fabs(self->width - bar) > tol)
        fail(ErrorCode::InconsistentWidths, "bar width violates the dumbbell relations");
      for (const PairObs& po : obs[p]) {
        if (&po == self) continue;
        if (po.slot_a != k && po.slot_b != k)
          fail(ErrorCode::InconsistentWidths, "loop arcs must meet the long boundary");
        int i = po.slot_a == k ? po.slot_b : po.slot_a;
        if (std::fabs(po.width - l[i]) > tol)
          fail(ErrorCode::InconsistentWidths, "loop width must equal its boundary length");
      }
    }
    spines.push_back(pants_spine(l[0], l[1], l[2]));

    // Twists from side-1 arcs: u = twist - s on that side.
    for (const PairObs& po : obs[p]) {
      if (po.slot_a == po.slot_b) continue;  // bar position checked below
      const SpineArc* sa = nullptr;
      for (const SpineArc& cand : spines[p].arcs) {
        if ((cand.slot_a == po.slot_a && cand.slot_b == po.slot_b) ||
            (cand.slot_a == po.slot_b && cand.slot_b == po.slot_a))
          sa = &cand;
      }
      if (sa == nullptr) fail(ErrorCode::InconsistentWidths, "arc pair matches no spine arc");
      for (auto [slot, arc_id] :
           {std::pair{po.slot_a, po.arc_a}, std::pair{po.slot_b, po.arc_b}}) {
        double center_s = slot == sa->slot_a ? sa->center_a : sa->center_b;
        const PantsDecomposition::SlotRef& ref = slots[p][slot];
        if (ref.end != 1) continue;
        double tw = wrap_mod(seed.flat.arcs[arc_id].center + center_s, lengths[ref.curve]);
        if (twist_known[ref.curve] &&
            circ_dist(tw, twists[ref.curve], lengths[ref.curve]) > 1e-7 * (1 + lengths[ref.curve]))
          fail(ErrorCode::InconsistentGluing, "side arcs disagree on the twist");
        twists[ref.curve] = tw;
        twist_known[ref.curve] = true;
      }
    }
  }

  FNSurface fn;
  fn.dec = seed.dec;
  fn.lengths = lengths;
  fn.twists = twists;
  GraftedComplex g = graft(fn, {weights});

  // Every arc position must be explained by the recovered surface.
  for (int p = 0; p < np; ++p) {
    for (const SpineArc& sa : spines[p].arcs) {
      for (auto [slot, center_s] :
           {std::pair{sa.slot_a, sa.center_a}, std::pair{sa.slot_b, sa.center_b}}) {
        const PantsDecomposition::SlotRef& ref = slots[p][slot];
        double u = g.geom.u_from_side(ref.curve, ref.end, center_s);
        double best = 1e300;
        for (int a = 0; a < (int)seed.flat.arcs.size(); ++a) {
          if (seed.arc_from[a][0] != p || seed.arc_from[a][1] != slot) continue;
          if (seed.flat.arcs[a].circle != 2 * ref.curve + ref.end) continue;
          best = std::min(best, circ_dist(seed.flat.arcs[a].center, u, lengths[ref.curve]));
        }
        if (best > 1e-7 * (1 + lengths[ref.curve]))
          fail(ErrorCode::InconsistentGluing, "arc positions do not match the recovered twists");
      }
    }
  }
  return g;
}

GraftedComplex inflation_ray(const FlatSeed& seed, double t) {
  if (!(t > 0)) fail(ErrorCode::ContractViolation, "ray parameter must be positive");
  GraftedComplex base = inflate(seed);
  FNSurface fn = base.geom.fn;
  WeightedMulticurve mu = base.mu;
  for (double& l : fn.lengths) l /= t;
  for (double& tw : fn.twists) tw /= t;
  for (double& w : mu.weights) w /= t;
  return graft(fn, mu);
}

std::vector<ConvergenceRow> convergence_experiment(const FlatSeed& seed,
                                                   const std::vector<double>& ts, int n_pairs,
                                                   double net_step, Rng& rng, int jobs) {
  std::vector<ConvergenceRow> rows;
  for (double t : ts) {
    Rng sub(rng.bits());
    GraftedComplex g = inflation_ray(seed, t);
    double l_lam = length_of_lamination(g.geom.fn, g.mu);
    double kt = std::sqrt(l_lam);
    GraftedComplex unit = rescale(g, 1 / kt);
    Deflation d = deflate(unit);
    DistortionStats st = distortion_sample(d, n_pairs, net_step, sub, jobs);
    rows.push_back({t, kt, l_lam, st.max_abs_lower, st.max_abs_upper, st.surj_slack,
                    slimness_check(unit)});
  }
  return rows;
}

}  // namespace grafting
