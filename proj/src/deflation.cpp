#include "grafting/deflation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "grafting/errors.hpp"
#include "grafting/parallel.hpp"

namespace grafting {

namespace {

double circ_sdiff(double a, double b, double m) { return wrap_mod(a - b + m / 2, m) - m / 2; }
double circ_dist(double a, double b, double m) { return std::fabs(circ_sdiff(a, b, m)); }

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

std::string msg(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

double FlatComplex::area() const {
  double total = 0;
  for (const FlatCylinder& c : cylinders) total += c.circumference * c.height;
  return total;
}

std::vector<FlatCone> cone_audit(const FlatComplex& f) {
  int ncirc = (int)f.circle_arcs.size();

  // Paired exactly once, involutive, equal lengths.
  for (int a = 0; a < (int)f.arcs.size(); ++a) {
    const FlatArc& arc = f.arcs[a];
    if (arc.partner < 0 || arc.partner >= (int)f.arcs.size() ||
        f.arcs[arc.partner].partner != a)
      fail(ErrorCode::InconsistentGluing, "arc pairing is not an involution");
    if (std::fabs(arc.length - f.arcs[arc.partner].length) > 1e-9 * (1 + arc.length))
      fail(ErrorCode::InconsistentGluing, "paired arcs differ in length");
  }

  // Cuts: shared endpoints of consecutive arcs around each circle.
  std::vector<std::vector<std::pair<double, int>>> cuts(ncirc);  // (position, cut id)
  std::vector<int> cut_circle;
  int next_cut = 0;
  for (int c = 0; c < ncirc; ++c) {
    const std::vector<int>& ids = f.circle_arcs[c];
    if (ids.empty()) continue;
    double circ = f.cylinders[c / 2].circumference;
    double tol = 1e-7 * (1 + circ);
    double covered = 0;
    for (int id : ids) covered += f.arcs[id].length;
    if (std::fabs(covered - circ) > tol)
      fail(ErrorCode::InconsistentGluing,
           msg("arcs cover %.12g of a circle of length %.12g", covered, circ));
    int m = (int)ids.size();
    for (int k = 0; k < m; ++k) {
      const FlatArc& cur = f.arcs[ids[k]];
      const FlatArc& nxt = f.arcs[ids[(k + 1) % m]];
      double end = wrap_mod(cur.center + cur.length / 2, circ);
      double start = wrap_mod(nxt.center - nxt.length / 2, circ);
      if (circ_dist(end, start, circ) > tol)
        fail(ErrorCode::InconsistentGluing, "consecutive arcs do not abut");
      cuts[c].push_back({end, next_cut});
      cut_circle.push_back(c);
      ++next_cut;
    }
    std::sort(cuts[c].begin(), cuts[c].end());
  }

  auto cut_at = [&](int circle, double pos) {
    double circ = f.cylinders[circle / 2].circumference;
    double tol = 1e-7 * (1 + circ);
    const auto& list = cuts[circle];
    double p = wrap_mod(pos, circ);
    auto it = std::lower_bound(list.begin(), list.end(), std::make_pair(p, -1));
    for (auto cand : {it, it == list.begin() ? list.end() - 1 : it - 1,
                      it == list.end() ? list.begin() : it}) {
      if (cand == list.end()) cand = list.begin();
      if (circ_dist(cand->first, p, circ) <= tol) return cand->second;
    }
    fail(ErrorCode::InconsistentGluing, "pairing image misses every cut");
  };

  // Identify cut points across the pairings: the t = +w/2 end of an arc meets
  // the t = -w/2 end of its partner and vice versa.
  std::vector<int> parent(next_cut);
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < (int)f.arcs.size(); ++a) {
    const FlatArc& A = f.arcs[a];
    if (A.partner < a) continue;
    const FlatArc& B = f.arcs[A.partner];
    for (double t : {A.length / 2, -A.length / 2}) {
      int ca = cut_at(A.circle, A.center + A.sign * t);
      int cb = cut_at(B.circle, B.center - B.sign * t);
      parent[uf_find(parent, ca)] = uf_find(parent, cb);
    }
  }

  std::vector<int> root_cone(next_cut, -1);
  std::vector<FlatCone> cones;
  for (int c = 0; c < next_cut; ++c) {
    int r = uf_find(parent, c);
    if (root_cone[r] < 0) {
      root_cone[r] = (int)cones.size();
      cones.push_back({});
    }
    cones[root_cone[r]].cuts.push_back(c);
  }
  double excess = 0;
  for (FlatCone& cone : cones) {
    cone.angle = M_PI * (double)cone.cuts.size();
    if (cone.cuts.size() < 3)
      fail(ErrorCode::ContractViolation,
           msg("cone angle %.12g pi is below 3 pi", (double)cone.cuts.size(), 0.0));
    excess += cone.angle - 2 * M_PI;
  }
  double want = 2 * M_PI * (2 * f.genus - 2);
  if (std::fabs(excess - want) > 1e-9 * (1 + std::fabs(want)))
    fail(ErrorCode::ContractViolation,
         msg("total angle excess %.12g, expected %.12g", excess, want));
  return cones;
}

Deflation deflate(const GraftedComplex& g) {
  const FNSurface& fn = g.geom.fn;
  int nc = fn.dec.num_curves();
  for (int e = 0; e < nc; ++e)
    if (!g.mu.supported(e))
      fail(ErrorCode::PartialSupport, "deflation needs every decomposition curve weighted");

  Deflation d;
  d.source = g;
  for (const PantsGeometry& pg : g.geom.pants) {
    d.spines.push_back(pants_spine(pg));
    if (d.spines.back().kind == RibbonSpine::Kind::FigureEight)
      fail(ErrorCode::DegenerateSpine, "figure-eight spine has no flat gluing");
  }

  FlatComplex& f = d.flat;
  f.genus = fn.dec.genus;
  f.scale = g.scale;
  for (int e = 0; e < nc; ++e)
    f.cylinders.push_back({e, g.scale * fn.lengths[e], g.scale * g.mu.weights[e]});
  f.circle_arcs.assign(2 * nc, {});

  auto add_side = [&](int pants, int slot, double center_s, double width) {
    const PantsDecomposition::SlotRef& ref = g.geom.slots[pants][slot];
    int id = (int)f.arcs.size();
    FlatArc arc;
    arc.circle = 2 * ref.curve + ref.end;
    arc.center = g.scale * g.geom.u_from_side(ref.curve, ref.end, center_s);
    arc.length = g.scale * width;
    arc.sign = ref.end == 0 ? 1 : -1;
    f.arcs.push_back(arc);
    f.circle_arcs[arc.circle].push_back(id);
    return id;
  };
  for (int p = 0; p < (int)g.geom.pants.size(); ++p) {
    for (const SpineArc& sa : d.spines[p].arcs) {
      int ia = add_side(p, sa.slot_a, sa.center_a, sa.width);
      int ib = add_side(p, sa.slot_b, sa.center_b, sa.width);
      f.arcs[ia].partner = ib;
      f.arcs[ib].partner = ia;
    }
  }
  for (std::vector<int>& ids : f.circle_arcs)
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return f.arcs[a].center < f.arcs[b].center; });

  f.cones = cone_audit(f);
  return d;
}

SurfacePoint deflate_point(const Deflation& d, const SurfacePoint& p) {
  const GraftedComplex& g = d.source;
  if (p.kind == SurfacePoint::Kind::Cylinder) {
    int e = g.cylinders.at(p.piece).curve;
    return SurfacePoint::cylinder(e, wrap_mod(p.u, d.flat.circumference(e)), p.v);
  }
  const PantsGeometry& pg = g.geom.pants.at(p.pants);
  PantsGeometry::NearestBoundary nb = pg.nearest_boundary(p.z);
  double s = pg.foot_coordinate(nb.boundary, nb.proj);
  const PantsDecomposition::SlotRef& ref = g.geom.slots[p.pants][nb.boundary];
  double u = g.scale * g.geom.u_from_side(ref.curve, ref.end, s);
  double v = ref.end == 0 ? 0.0 : d.flat.height(ref.curve);
  return SurfacePoint::cylinder(ref.curve, u, v);
}

FlatNet::FlatNet(FlatComplex f, double net_step, std::size_t node_cap)
    : f_(std::move(f)), step_(net_step) {
  if (!(net_step > 0)) fail(ErrorCode::ContractViolation, "net step must be positive");
  int ncirc = (int)f_.circle_arcs.size();
  circle_nodes_.assign(ncirc, {});
  for (int c = 0; c < ncirc; ++c) {
    double circ = f_.cylinders[c / 2].circumference;
    auto need = (unsigned long long)std::ceil(circ / step_);
    unsigned long long n = std::bit_ceil(std::max(4ULL, need));
    for (unsigned long long j = 0; j < n; ++j) {
      if (nodes_.size() >= node_cap)
        fail(ErrorCode::BudgetExceeded, "flat net node cap exceeded");
      circle_nodes_[c].push_back((int)nodes_.size());
      nodes_.push_back({c, circ * (double)j / (double)n});
    }
  }
  adj_.assign(nodes_.size(), {});

  for (int c = 0; c < ncirc; ++c) {
    const std::vector<int>& ring = circle_nodes_[c];
    int n = (int)ring.size();
    double circ = f_.cylinders[c / 2].circumference;
    double arc = circ / n;
    for (int j = 0; j < n; ++j) {
      int a = ring[j], b = ring[(j + 1) % n];
      adj_[a].push_back({b, arc, -1});
      adj_[b].push_back({a, arc, -1});
    }
  }

  for (int e = 0; e < (int)f_.cylinders.size(); ++e) {
    const FlatCylinder& cyl = f_.cylinders[e];
    for (int a : circle_nodes_[2 * e]) {
      for (int b : circle_nodes_[2 * e + 1]) {
        double w = cylinder_chord(cyl.circumference, nodes_[b].u - nodes_[a].u, cyl.height);
        adj_[a].push_back({b, w, e});
        adj_[b].push_back({a, w, e});
      }
    }
  }

  // Hop across each pairing: land at the image point, walk to the two nodes
  // bracketing it.
  for (int x = 0; x < (int)nodes_.size(); ++x) {
    const Node& nd = nodes_[x];
    double circ = f_.cylinders[nd.circle / 2].circumference;
    for (int id : f_.circle_arcs[nd.circle]) {
      const FlatArc& A = f_.arcs[id];
      double t = A.sign * circ_sdiff(nd.u, A.center, circ);
      if (std::fabs(t) > A.length / 2 + 1e-12 * (1 + circ)) continue;
      t = std::clamp(t, -A.length / 2, A.length / 2);
      const FlatArc& B = f_.arcs[A.partner];
      double circ_b = f_.cylinders[B.circle / 2].circumference;
      double image = wrap_mod(B.center - B.sign * t, circ_b);
      const std::vector<int>& ring = circle_nodes_[B.circle];
      int n = (int)ring.size();
      double h = circ_b / n;
      int lo = (int)std::floor(image / h) % n;
      for (int k : {lo, (lo + 1) % n}) {
        int y = ring[k];
        if (y == x) continue;
        double w = circ_dist(image, nodes_[y].u, circ_b);
        adj_[x].push_back({y, w, -1});
        adj_[y].push_back({x, w, -1});
      }
    }
  }
}

void FlatNet::attach(const SurfacePoint& p, std::vector<Edge>& out) const {
  if (p.kind != SurfacePoint::Kind::Cylinder)
    fail(ErrorCode::ContractViolation, "flat points live on cylinders");
  const FlatCylinder& cyl = f_.cylinders.at(p.piece);
  for (int rim = 0; rim < 2; ++rim) {
    double dv = rim == 0 ? p.v : cyl.height - p.v;
    bool over_core = rim == 0 ? p.v > cyl.height / 2 : p.v < cyl.height / 2;
    int cross = over_core ? p.piece : -1;
    for (int id : circle_nodes_[2 * p.piece + rim])
      out.push_back({id, cylinder_chord(cyl.circumference, nodes_[id].u - p.u, dv), cross});
  }
}

DistanceResult FlatNet::query(const SurfacePoint& p, const SurfacePoint& q) const {
  int ncurve = (int)f_.cylinders.size();
  if (p.kind == q.kind && p.piece == q.piece && p.u == q.u && p.v == q.v)
    return {0, 0, std::vector<int>(ncurve, 0)};

  std::vector<Edge> from_p, from_q;
  attach(p, from_p);
  attach(q, from_q);
  double direct = std::numeric_limits<double>::infinity();
  int direct_cross = -1;
  if (p.piece == q.piece) {
    const FlatCylinder& cyl = f_.cylinders[p.piece];
    direct = cylinder_chord(cyl.circumference, q.u - p.u, q.v - p.v);
    if ((p.v - cyl.height / 2) * (q.v - cyl.height / 2) < 0) direct_cross = p.piece;
  }

  int n = (int)nodes_.size();
  int src = n, dst = n + 1;
  std::vector<double> into_q(n, std::numeric_limits<double>::infinity());
  std::vector<int> into_q_cross(n, -1);
  for (const Edge& e : from_q) {
    if (e.w < into_q[e.to]) {
      into_q[e.to] = e.w;
      into_q_cross[e.to] = e.cross;
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n + 2, inf);
  std::vector<int> pred(n + 2, -1);
  std::vector<int> pred_curve(n + 2, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[src] = 0;
  heap.push({0, src});
  auto relax = [&](int from, int to, double w, int curve) {
    if (dist[from] + w < dist[to]) {
      dist[to] = dist[from] + w;
      pred[to] = from;
      pred_curve[to] = curve;
      heap.push({dist[to], to});
    }
  };
  while (!heap.empty()) {
    auto [dcur, x] = heap.top();
    heap.pop();
    if (dcur > dist[x]) continue;
    if (x == dst) break;
    if (x == src) {
      for (const Edge& e : from_p) relax(src, e.to, e.w, e.cross);
      if (direct < inf) relax(src, dst, direct, direct_cross);
      continue;
    }
    for (const Edge& e : adj_[x]) relax(x, e.to, e.w, e.cross);
    if (into_q[x] < inf) relax(x, dst, into_q[x], into_q_cross[x]);
  }
  if (!(dist[dst] < inf))
    fail(ErrorCode::ContractViolation, "flat net failed to connect the query points");

  DistanceResult res;
  res.upper = dist[dst];
  res.lower = std::max(0.0, res.upper - 4 * step_);
  res.crossings.assign(ncurve, 0);
  for (int x = dst; pred[x] >= 0; x = pred[x])
    if (pred_curve[x] >= 0) res.crossings[pred_curve[x]] += 1;
  return res;
}

DistanceResult flat_distance(const FlatComplex& f, const SurfacePoint& p, const SurfacePoint& q,
                             double net_step) {
  return FlatNet(f, net_step).query(p, q);
}

DistortionStats distortion_sample(const Deflation& d, int n_pairs, double net_step, Rng& rng,
                                  int jobs) {
  DistanceNet net_g(d.source, net_step, 60000, jobs);
  FlatNet net_f(d.flat, net_step);

  std::vector<std::pair<SurfacePoint, SurfacePoint>> pairs;
  for (int i = 0; i < n_pairs; ++i)
    pairs.push_back({sample_point(d.source, rng), sample_point(d.source, rng)});

  DistortionStats st;
  st.rows.assign(n_pairs, {});
  parallel_for((std::size_t)n_pairs, jobs, [&](std::size_t i) {
    const auto& [p, q] = pairs[i];
    DistanceResult gr = net_g.query(p, q);
    DistanceResult fl = net_f.query(deflate_point(d, p), deflate_point(d, q));
    DistortionRow row;
    row.gr_lower = gr.lower;
    row.gr_upper = gr.upper;
    row.fl_lower = fl.lower;
    row.fl_upper = fl.upper;
    row.abs_lower = std::max({0.0, fl.lower - gr.upper, gr.lower - fl.upper});
    row.abs_upper = std::max({0.0, fl.upper - gr.lower, gr.upper - fl.lower});
    st.rows[i] = row;
  });
  double mean = 0;
  for (const DistortionRow& r : st.rows) {
    st.max_abs_lower = std::max(st.max_abs_lower, r.abs_lower);
    st.max_abs_upper = std::max(st.max_abs_upper, r.abs_upper);
    mean += std::fabs((r.fl_lower + r.fl_upper) / 2 - (r.gr_lower + r.gr_upper) / 2);
  }
  st.mean_abs = n_pairs > 0 ? mean / n_pairs : 0;

  // Surjectivity at net resolution: fresh flat samples against the image of
  // the sampled pairs.
  std::vector<SurfacePoint> image;
  for (const auto& [p, q] : pairs) {
    image.push_back(deflate_point(d, p));
    image.push_back(deflate_point(d, q));
    if (image.size() >= 256) break;
  }
  int n_probe = std::min(n_pairs, 32);
  std::vector<double> probe_gap(n_probe, 0.0);
  std::vector<SurfacePoint> probes;
  double total = d.flat.area();
  for (int j = 0; j < n_probe; ++j) {
    double x = rng.uniform() * total;
    int e = 0;
    while (e + 1 < (int)d.flat.cylinders.size()) {
      double a = d.flat.cylinders[e].circumference * d.flat.cylinders[e].height;
      if (x <= a) break;
      x -= a;
      ++e;
    }
    probes.push_back(SurfacePoint::cylinder(e, rng.uniform() * d.flat.circumference(e),
                                            rng.uniform() * d.flat.height(e)));
  }
  parallel_for((std::size_t)n_probe, jobs, [&](std::size_t j) {
    double best = std::numeric_limits<double>::infinity();
    for (const SurfacePoint& c : image) best = std::min(best, net_f.query(probes[j], c).upper);
    probe_gap[j] = best;
  });
  for (double v : probe_gap) st.surj_slack = std::max(st.surj_slack, v);
  return st;
}

double slimness_check(const GraftedComplex& g) {
  double worst = 0;
  for (const PantsGeometry& pg : g.geom.pants)
    worst = std::max(worst, pants_inradius(pg));
  return worst * g.scale;
}

void write_flat(const FlatComplex& f, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "flat-surface genus %d scale %.17g\n", f.genus, f.scale);
  out << buf;
  std::snprintf(buf, sizeof buf, "cylinders %d\n", (int)f.cylinders.size());
  out << buf;
  for (int e = 0; e < (int)f.cylinders.size(); ++e) {
    std::snprintf(buf, sizeof buf, "cylinder %d %.17g %.17g\n", e,
                  f.cylinders[e].circumference, f.cylinders[e].height);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "arcs %d\n", (int)f.arcs.size());
  out << buf;
  for (int a = 0; a < (int)f.arcs.size(); ++a) {
    const FlatArc& arc = f.arcs[a];
    double circ = f.cylinders[arc.circle / 2].circumference;
    std::snprintf(buf, sizeof buf, "arc %d circle %d start %.17g length %.17g sign %d partner %d\n",
                  a, arc.circle, wrap_mod(arc.center - arc.length / 2, circ), arc.length,
                  arc.sign, arc.partner);
    out << buf;
  }
}

}  // namespace grafting
