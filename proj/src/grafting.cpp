#include "grafting/grafting.hpp"

#include <cmath>
#include <numeric>

#include "grafting/errors.hpp"

namespace grafting {

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

GraftedComplex graft(const FNSurface& fn, const WeightedMulticurve& mu) {
  if ((int)mu.weights.size() != fn.dec.num_curves())
    fail(ErrorCode::ContractViolation, "multicurve weight count does not match the curves");
  for (double w : mu.weights)
    if (!(w >= 0) || !std::isfinite(w))
      fail(ErrorCode::ContractViolation, "multicurve weights must be finite and nonnegative");

  GraftedComplex g;
  g.geom = build_surface(fn);
  g.mu = mu;
  g.scale = 1;

  int nc = fn.dec.num_curves();
  int np = fn.dec.num_pants();
  g.cylinder_of_curve.assign(nc, -1);
  for (int e = 0; e < nc; ++e) {
    if (!mu.supported(e)) continue;
    g.cylinder_of_curve[e] = (int)g.cylinders.size();
    g.cylinders.push_back({e, fn.lengths[e], mu.weights[e]});
  }

  // Pants sharing an unweighted curve sit in one hyperbolic piece.
  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  for (int e = 0; e < nc; ++e) {
    if (mu.supported(e)) continue;
    int a = find_root(parent, fn.dec.curves[e][0].pants);
    int b = find_root(parent, fn.dec.curves[e][1].pants);
    parent[a] = b;
  }
  g.piece_of_pants.assign(np, -1);
  for (int p = 0; p < np; ++p) {
    int r = find_root(parent, p);
    if (g.piece_of_pants[r] < 0) {
      g.piece_of_pants[r] = (int)g.pieces.size();
      g.pieces.push_back({});
    }
    g.piece_of_pants[p] = g.piece_of_pants[r];
    g.pieces[g.piece_of_pants[p]].push_back(p);
  }
  return g;
}

double area(const GraftedComplex& g) {
  double s2 = g.scale * g.scale;
  double total = 2 * M_PI * s2 * (double)g.geom.pants.size();
  for (const FlatCylinder& c : g.cylinders) total += c.circumference * c.height;
  return total;
}

double length_of_lamination(const FNSurface& fn, const WeightedMulticurve& mu) {
  if ((int)mu.weights.size() != fn.dec.num_curves())
    fail(ErrorCode::ContractViolation, "multicurve weight count does not match the curves");
  double total = 0;
  for (int e = 0; e < fn.dec.num_curves(); ++e) total += mu.weights[e] * fn.lengths[e];
  return total;
}

SurfacePoint collapse(const GraftedComplex& g, const SurfacePoint& p) {
  if (p.kind == SurfacePoint::Kind::Hyperbolic) {
    SurfacePoint out = p;
    out.piece = 0;
    return out;
  }
  const FlatCylinder& c = g.cylinders.at(p.piece);
  int e = c.curve;
  double u = wrap_mod(p.u / g.scale, g.geom.curve_len(e));
  const CurveSide& cs = g.geom.fn.dec.curves[e][0];
  return SurfacePoint::hyperbolic(0, cs.pants, g.geom.circle_point(e, 0, u));
}

GraftedComplex rescale(const GraftedComplex& g, double k) {
  if (!(k > 0)) fail(ErrorCode::ContractViolation, "rescale factor must be positive");
  GraftedComplex out = g;
  out.scale *= k;
  for (FlatCylinder& c : out.cylinders) {
    c.circumference = out.scale * out.geom.curve_len(c.curve);
    c.height = out.scale * out.mu.weights[c.curve];
  }
  return out;
}

GraftedComplex normalize_flat_unit(const GraftedComplex& g) {
  double flat = 0;
  for (const FlatCylinder& c : g.cylinders)
    flat += g.geom.curve_len(c.curve) * g.mu.weights[c.curve];
  if (!(flat > 0))
    fail(ErrorCode::ContractViolation, "zero lamination has no flat area to normalize");
  return rescale(g, 1.0 / (g.scale * std::sqrt(flat)));
}

SurfacePoint sample_point(const GraftedComplex& g, Rng& rng) {
  double s2 = g.scale * g.scale;
  std::vector<double> acc;
  for (size_t p = 0; p < g.geom.pants.size(); ++p) acc.push_back(2 * M_PI * s2);
  for (const FlatCylinder& c : g.cylinders) acc.push_back(c.circumference * c.height);
  for (size_t i = 1; i < acc.size(); ++i) acc[i] += acc[i - 1];
  double x = rng.uniform() * acc.back();
  size_t pick = 0;
  while (pick + 1 < acc.size() && x > acc[pick]) ++pick;
  int np = (int)g.geom.pants.size();
  if ((int)pick < np) {
    int p = (int)pick;
    return SurfacePoint::hyperbolic(g.piece_of_pants[p], p, g.geom.pants[p].sample_interior(rng));
  }
  int c = (int)pick - np;
  return SurfacePoint::cylinder(c, rng.uniform() * g.cylinders[c].circumference,
                                rng.uniform() * g.cylinders[c].height);
}

}  // namespace grafting
