#include "grafting/net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "grafting/errors.hpp"
#include "grafting/parallel.hpp"

namespace grafting {

double cylinder_chord(double circumference, double du, double dv) {
  double r = du - circumference * std::round(du / circumference);
  return std::hypot(r, dv);
}

DistanceNet::DistanceNet(GraftedComplex g, double net_step, std::size_t node_cap, int jobs)
    : g_(std::move(g)), step_(net_step) {
  if (!(net_step > 0)) fail(ErrorCode::ContractViolation, "net step must be positive");
  const FNSurface& fn = g_.geom.fn;
  int nc = fn.dec.num_curves();
  int np = fn.dec.num_pants();

  // Power-of-two node counts keep successive nets nested when the step halves.
  circle_nodes_.assign(2 * nc, {});
  for (int e = 0; e < nc; ++e) {
    double c = g_.scale * fn.lengths[e];
    auto need = (unsigned long long)std::ceil(c / step_);
    unsigned long long n = std::bit_ceil(std::max(4ULL, need));
    int rims = g_.mu.supported(e) ? 2 : 1;
    for (int rim = 0; rim < rims; ++rim) {
      for (unsigned long long j = 0; j < n; ++j) {
        if (nodes_.size() >= node_cap)
          fail(ErrorCode::BudgetExceeded, "distance net node cap exceeded");
        circle_nodes_[2 * e + rim].push_back((int)nodes_.size());
        nodes_.push_back({e, rim, fn.lengths[e] * (double)j / (double)n});
      }
    }
  }
  adj_.assign(nodes_.size(), {});

  // Arcs between consecutive nodes of each circle.
  for (int e = 0; e < nc; ++e) {
    for (int rim = 0; rim < 2; ++rim) {
      const std::vector<int>& ring = circle_nodes_[2 * e + rim];
      if (ring.empty()) continue;
      int n = (int)ring.size();
      double arc = g_.scale * fn.lengths[e] / n;
      for (int j = 0; j < n; ++j) {
        int a = ring[j], b = ring[(j + 1) % n];
        adj_[a].push_back({b, arc, EdgeType::Ring, 0, 0, e});
        adj_[b].push_back({a, arc, EdgeType::Ring, 0, 0, e});
      }
    }
  }

  // Straight segments through each cylinder, all rim pairs.
  for (int c = 0; c < g_.num_cylinders(); ++c) {
    const FlatCylinder& cyl = g_.cylinders[c];
    const std::vector<int>& bot = circle_nodes_[2 * cyl.curve];
    const std::vector<int>& top = circle_nodes_[2 * cyl.curve + 1];
    for (int a : bot) {
      for (int b : top) {
        double du = g_.scale * (nodes_[b].u - nodes_[a].u);
        double w = cylinder_chord(cyl.circumference, du, cyl.height);
        adj_[a].push_back({b, w, EdgeType::CylTraverse, 0, 0, c});
        adj_[b].push_back({a, w, EdgeType::CylTraverse, 0, 0, c});
      }
    }
  }

  // Every node developed into each pants it touches.
  anchors_.assign(np, {});
  for (int e = 0; e < nc; ++e) {
    for (int end = 0; end < 2; ++end) {
      const CurveSide& cs = fn.dec.curves[e][end];
      int rim = g_.mu.supported(e) ? end : 0;
      for (int id : circle_nodes_[2 * e + rim])
        anchors_[cs.pants].push_back(
            {id, (std::uint8_t)end, g_.geom.circle_point(e, end, nodes_[id].u)});
    }
  }

  // Geodesic distances inside each pants, all anchor pairs.
  struct Pair {
    int pants, ia, ib;
    double w = 0;
  };
  std::vector<Pair> pairs;
  for (int p = 0; p < np; ++p) {
    int m = (int)anchors_[p].size();
    for (int ia = 0; ia < m; ++ia)
      for (int ib = ia + 1; ib < m; ++ib)
        if (anchors_[p][ia].node != anchors_[p][ib].node) pairs.push_back({p, ia, ib});
  }
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    Pair& pr = pairs[k];
    const Anchor& a = anchors_[pr.pants][pr.ia];
    const Anchor& b = anchors_[pr.pants][pr.ib];
    pr.w = g_.scale * g_.geom.pants[pr.pants].distance(a.z, b.z);
  });
  for (const Pair& pr : pairs) {
    const Anchor& a = anchors_[pr.pants][pr.ia];
    const Anchor& b = anchors_[pr.pants][pr.ib];
    adj_[a.node].push_back({b.node, pr.w, EdgeType::Pants, a.end, b.end, pr.pants});
    adj_[b.node].push_back({a.node, pr.w, EdgeType::Pants, b.end, a.end, pr.pants});
  }
}

void DistanceNet::attach(const SurfacePoint& p, std::vector<TempEdge>& out) const {
  if (p.kind == SurfacePoint::Kind::Hyperbolic) {
    const PantsGeometry& pg = g_.geom.pants.at(p.pants);
    for (const Anchor& a : anchors_[p.pants])
      out.push_back({a.node, g_.scale * pg.distance(p.z, a.z), EdgeType::Pants, a.end});
    return;
  }
  const FlatCylinder& cyl = g_.cylinders.at(p.piece);
  for (int rim = 0; rim < 2; ++rim) {
    double dv = rim == 0 ? p.v : cyl.height - p.v;
    bool over_core = rim == 0 ? p.v > cyl.height / 2 : p.v < cyl.height / 2;
    int owner = over_core ? p.piece : -1;
    for (int id : circle_nodes_[2 * cyl.curve + rim]) {
      double du = g_.scale * nodes_[id].u - p.u;
      out.push_back({id, cylinder_chord(cyl.circumference, du, dv), EdgeType::CylPartial, 0, owner});
    }
  }
}

std::vector<int> DistanceNet::count_crossings(const std::vector<Edge>& path) const {
  std::vector<int> crossings(g_.geom.fn.dec.num_curves(), 0);
  int run_curve = -1;
  int run_side = -1;
  for (const Edge& e : path) {
    switch (e.type) {
      case EdgeType::Ring:
        continue;  // walking along the same circle keeps the entry side
      case EdgeType::CylTraverse:
        crossings[g_.cylinders[e.owner].curve] += 1;
        run_curve = -1;
        break;
      case EdgeType::CylPartial:
        if (e.owner >= 0) crossings[g_.cylinders[e.owner].curve] += 1;
        run_curve = -1;
        break;
      case EdgeType::Pants:
        if (run_curve >= 0 && e.end_from != run_side) crossings[run_curve] += 1;
        run_curve = -1;
        break;
    }
    if (e.to >= 0 && e.to < (int)nodes_.size()) {
      const Node& n = nodes_[e.to];
      if (!g_.mu.supported(n.curve) && e.type == EdgeType::Pants) {
        run_curve = n.curve;
        run_side = e.end_to;
      }
    }
  }
  return crossings;
}

DistanceResult DistanceNet::query(const SurfacePoint& p, const SurfacePoint& q) const {
  int nc = g_.geom.fn.dec.num_curves();
  bool same =
      p.kind == q.kind &&
      (p.kind == SurfacePoint::Kind::Hyperbolic
           ? (p.pants == q.pants && p.z.x == q.z.x && p.z.y == q.z.y)
           : (p.piece == q.piece && p.u == q.u && p.v == q.v));
  if (same) return {0, 0, std::vector<int>(nc, 0)};

  std::vector<TempEdge> from_p, from_q;
  attach(p, from_p);
  attach(q, from_q);

  int n = (int)nodes_.size();
  int src = n, dst = n + 1;
  double direct = std::numeric_limits<double>::infinity();
  EdgeType direct_type = EdgeType::Pants;
  int direct_owner = -1;
  if (p.kind == SurfacePoint::Kind::Hyperbolic && q.kind == SurfacePoint::Kind::Hyperbolic &&
      p.pants == q.pants) {
    direct = g_.scale * g_.geom.pants[p.pants].distance(p.z, q.z);
  } else if (p.kind == SurfacePoint::Kind::Cylinder && q.kind == SurfacePoint::Kind::Cylinder &&
             p.piece == q.piece) {
    const FlatCylinder& cyl = g_.cylinders[p.piece];
    direct = cylinder_chord(cyl.circumference, q.u - p.u, q.v - p.v);
    direct_type = EdgeType::CylPartial;
    if ((p.v - cyl.height / 2) * (q.v - cyl.height / 2) < 0) direct_owner = p.piece;
  }

  std::vector<double> into_q(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> into_q_end(n, 0);
  std::vector<EdgeType> into_q_type(n, EdgeType::Pants);
  std::vector<int> into_q_owner(n, -1);
  for (const TempEdge& te : from_q) {
    if (te.w < into_q[te.node]) {
      into_q[te.node] = te.w;
      into_q_end[te.node] = te.end;
      into_q_type[te.node] = te.type;
      into_q_owner[te.node] = te.owner;
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n + 2, inf);
  std::vector<Edge> pred(n + 2, Edge{-1, 0, EdgeType::Pants, 0, 0, -1});
  std::vector<int> pred_from(n + 2, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[src] = 0;
  heap.push({0, src});
  auto relax = [&](int from, int to, double w, const Edge& via) {
    double nd = dist[from] + w;
    if (nd < dist[to]) {
      dist[to] = nd;
      pred[to] = via;
      pred_from[to] = from;
      heap.push({nd, to});
    }
  };
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    if (x == dst) break;
    if (x == src) {
      for (const TempEdge& te : from_p)
        relax(src, te.node, te.w, {te.node, te.w, te.type, 255, te.end, te.owner});
      if (direct < inf) relax(src, dst, direct, {dst, direct, direct_type, 255, 255, direct_owner});
      continue;
    }
    for (const Edge& e : adj_[x]) relax(x, e.to, e.w, e);
    if (into_q[x] < inf)
      relax(x, dst, into_q[x], {dst, into_q[x], into_q_type[x], into_q_end[x], 255, into_q_owner[x]});
  }

  if (!(dist[dst] < inf))
    fail(ErrorCode::ContractViolation, "distance net failed to connect the query points");

  std::vector<Edge> path;
  for (int x = dst; x != src; x = pred_from[x]) path.push_back(pred[x]);
  std::reverse(path.begin(), path.end());

  DistanceResult res;
  res.upper = dist[dst];
  res.lower = std::max(0.0, res.upper - 4 * step_);
  res.crossings = count_crossings(path);
  return res;
}

DistanceResult grafted_distance(const GraftedComplex& g, const SurfacePoint& p,
                                const SurfacePoint& q, double net_step) {
  return DistanceNet(g, net_step).query(p, q);
}

}  // namespace grafting
