#include "grafting/pants.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "grafting/errors.hpp"

namespace grafting {

namespace {

std::string msg(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

}  // namespace

double wrap_mod(double x, double m) {
  double r = std::fmod(x, m);
  if (r < 0) r += m;
  if (r >= m) r -= m;
  return r;
}

std::vector<std::array<PantsDecomposition::SlotRef, 3>> PantsDecomposition::slot_map() const {
  std::vector<std::array<SlotRef, 3>> map(num_pants());
  for (int e = 0; e < (int)curves.size(); ++e) {
    for (int end = 0; end < 2; ++end) {
      const CurveSide& cs = curves[e][end];
      if (cs.pants < 0 || cs.pants >= num_pants() || cs.slot < 0 || cs.slot >= 3)
        fail(ErrorCode::ConfigError, "curve side out of range");
      SlotRef& ref = map[cs.pants][cs.slot];
      if (ref.curve >= 0) fail(ErrorCode::ConfigError, "boundary slot used twice");
      ref = SlotRef{e, end};
    }
  }
  for (int p = 0; p < num_pants(); ++p)
    for (int s = 0; s < 3; ++s)
      if (map[p][s].curve < 0) fail(ErrorCode::ConfigError, "boundary slot left unglued");
  return map;
}

void PantsDecomposition::validate() const {
  if (genus < 2) fail(ErrorCode::ConfigError, "genus must be at least 2");
  if ((int)curves.size() != num_curves())
    fail(ErrorCode::ConfigError, "wrong number of decomposition curves");
  slot_map();
  std::vector<int> comp(num_pants());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (comp[a] != a) a = comp[a] = comp[comp[a]];
    return a;
  };
  for (const auto& cu : curves) comp[find(cu[0].pants)] = find(cu[1].pants);
  for (int p = 0; p < num_pants(); ++p)
    if (find(p) != find(0)) fail(ErrorCode::ConfigError, "gluing graph is disconnected");
}

PantsDecomposition PantsDecomposition::genus2_standard() {
  PantsDecomposition dec;
  dec.genus = 2;
  dec.curves = {{{{0, 0}, {1, 0}}}, {{{0, 1}, {1, 1}}}, {{{0, 2}, {1, 2}}}};
  return dec;
}

PantsDecomposition PantsDecomposition::genus2_loops() {
  PantsDecomposition dec;
  dec.genus = 2;
  dec.curves = {{{{0, 0}, {0, 1}}}, {{{0, 2}, {1, 0}}}, {{{1, 1}, {1, 2}}}};
  return dec;
}

PantsDecomposition PantsDecomposition::genus3_linear() {
  PantsDecomposition dec;
  dec.genus = 3;
  dec.curves = {{{{0, 0}, {0, 1}}}, {{{0, 2}, {1, 0}}}, {{{1, 1}, {2, 0}}},
                {{{1, 2}, {2, 1}}}, {{{2, 2}, {3, 0}}}, {{{3, 1}, {3, 2}}}};
  return dec;
}

void FNSurface::validate() const {
  dec.validate();
  if ((int)lengths.size() != dec.num_curves() || (int)twists.size() != dec.num_curves())
    fail(ErrorCode::ConfigError, "lengths/twists size must match curve count");
  for (double l : lengths)
    if (!(l > 0) || !std::isfinite(l))
      fail(ErrorCode::ConfigError, "curve lengths must be positive and finite");
  for (double t : twists)
    if (!std::isfinite(t)) fail(ErrorCode::ConfigError, "twists must be finite");
}

double systole_lower_bound(const FNSurface& fn) {
  return *std::min_element(fn.lengths.begin(), fn.lengths.end());
}

// ---------------------------------------------------------------------------
// PantsGeometry

namespace {

double side_value(const H2Geodesic& g, const H2Point& p) {
  if (g.vertical) return p.x - g.c;
  double dx = p.x - g.c;
  return dx * dx + p.y * p.y - g.r * g.r;
}

double point_proxy(const H2Point& p, const H2Point& q) {
  double dx = p.x - q.x, dy = p.y - q.y;
  return (dx * dx + dy * dy) / (p.y * q.y);
}

H2Point apply_fast(const Motion& m, const H2Point& p) {
  double x = p.x, y = m.conj ? -p.y : p.y;
  double e = m.c * x + m.d, f = m.c * y;
  double n2 = e * e + f * f;
  double det = m.a * m.d - m.b * m.c;
  return {((m.a * x + m.b) * e + m.a * y * f) / n2, det * y / n2};
}

H2Point midpoint(const H2Point& p, const H2Point& q) {
  H2Geodesic g = geodesic_through(p, q);
  double t = 0.5 * (geodesic_coordinate(g, p) + geodesic_coordinate(g, q));
  return geodesic_point(g, t);
}

}  // namespace

PantsGeometry build_pants(double l1, double l2, double l3) {
  std::array<double, 3> bl = {l1, l2, l3};
  for (double l : bl)
    if (!(l > 0) || !std::isfinite(l))
      fail(ErrorCode::ConfigError, "boundary length must be positive and finite");

  PantsGeometry pg;
  pg.boundary_len = bl;
  pg.hex = right_hexagon(l1 / 2, l2 / 2, l3 / 2);
  const Hexagon& hx = pg.hex;

  pg.G = {hx.side[0], hx.side[2], hx.side[4]};
  pg.seam = {hx.side[1], hx.side[3], hx.side[5]};
  pg.seam_len = {hx.side_len[1], hx.side_len[3], hx.side_len[5]};
  for (int k = 0; k < 3; ++k) pg.seam_refl[k] = reflection(pg.seam[k]);

  // Coordinate origins: boundary 0 at the seam-01 foot v1, boundary 1 at v2,
  // boundary 2 at the seam-20 foot v5.
  std::array<int, 3> ov = {1, 2, 5};
  std::array<int, 3> other = {0, 3, 4};  // far end of the hexagon arc on G[i]
  pg.origin_vertex = ov;
  for (int i = 0; i < 3; ++i) {
    pg.origin_t[i] = geodesic_coordinate(pg.G[i], hx.v[ov[i]]);
    double to = geodesic_coordinate(pg.G[i], hx.v[other[i]]);
    pg.half_sign[i] = to > pg.origin_t[i] ? 1 : -1;
  }

  pg.A = compose(pg.seam_refl[0], pg.seam_refl[2]);
  pg.B = compose(pg.seam_refl[0], pg.seam_refl[1]);

  pg.ref = midpoint(hx.v[0], hx.v[3]);
  pg.ref_spread = 0;
  for (int k = 0; k < 6; ++k) {
    pg.ref_spread = std::max(pg.ref_spread, dist(pg.ref, hx.v[k]));
    pg.ref_spread = std::max(pg.ref_spread, dist(pg.ref, apply(pg.seam_refl[0], hx.v[k])));
  }
  for (int k = 0; k < 6; ++k) {
    double sv = side_value(hx.side[k], pg.ref);
    if (sv == 0) fail(ErrorCode::ContractViolation, "reference point on hexagon side");
    pg.sign_[k] = sv > 0 ? 1.0 : -1.0;
  }
  pg.build_box();

  // Seam lengths must agree with the common perpendiculars of the boundary
  // geodesics, with the feet at the hexagon vertices.
  struct SeamCheck {
    int k, i, j, va, vb;
  };
  for (const SeamCheck& sc :
       {SeamCheck{0, 0, 1, 1, 2}, SeamCheck{1, 1, 2, 3, 4}, SeamCheck{2, 2, 0, 5, 0}}) {
    CommonPerpendicular cp = common_perpendicular(pg.G[sc.i], pg.G[sc.j]);
    double want = pg.seam_len[sc.k];
    if (std::abs(cp.length - want) > 1e-9 * (1 + want))
      fail(ErrorCode::ContractViolation,
           msg("seam length %.12g disagrees with perpendicular %.12g", want, cp.length));
    double fa = std::min(dist(cp.foot1, hx.v[sc.va]), dist(cp.foot1, hx.v[sc.vb]));
    double fb = std::min(dist(cp.foot2, hx.v[sc.va]), dist(cp.foot2, hx.v[sc.vb]));
    if (fa > 1e-8 * (1 + want) || fb > 1e-8 * (1 + want))
      fail(ErrorCode::ContractViolation, "seam feet miss the hexagon vertices");
  }
  for (int i = 0; i < 3; ++i) {
    H2Point o = hx.v[ov[i]];
    Motion hol = i == 0 ? pg.A : (i == 1 ? pg.B : compose(inverse(pg.B), pg.A));
    double d = dist(o, apply(hol, o));
    if (std::abs(d - bl[i]) > 1e-8 * (1 + bl[i]))
      fail(ErrorCode::ContractViolation,
           msg("boundary holonomy translates by %.12g, expected %.12g", d, bl[i]));
  }

  pg.build_words(2);
  pg.build_lifts();
  return pg;
}

void PantsGeometry::build_box() {
  const Hexagon& hx = hex;
  double x0 = hx.v[0].x, x1 = hx.v[0].x, y0 = hx.v[0].y, y1 = hx.v[0].y;
  for (int k = 0; k < 6; ++k) {
    x0 = std::min(x0, hx.v[k].x);
    x1 = std::max(x1, hx.v[k].x);
    y0 = std::min(y0, hx.v[k].y);
    y1 = std::max(y1, hx.v[k].y);
  }
  for (int k = 0; k < 6; ++k) {
    const H2Geodesic& g = hx.side[k];
    if (g.vertical) continue;
    const H2Point &a = hx.v[k], &b = hx.v[(k + 1) % 6];
    if ((a.x - g.c) * (b.x - g.c) < 0) y1 = std::max(y1, g.r);  // arc tops out
  }
  box_[0] = x0;
  box_[1] = x1;
  box_[2] = y0;
  box_[3] = y1;
}

bool PantsGeometry::contains(const H2Point& p) const {
  auto in_hex = [&](const H2Point& z) {
    for (int k = 0; k < 6; ++k) {
      double tol = 1e-12 * (1 + (hex.side[k].vertical ? 1.0 : hex.side[k].r * hex.side[k].r));
      if (side_value(hex.side[k], z) * sign_[k] < -tol) return false;
    }
    return true;
  };
  return in_hex(p) || in_hex(apply_fast(seam_refl[0], p));
}

H2Point PantsGeometry::sample_interior(Rng& rng) const {
  bool flip = rng.bits() & 1;
  double inv0 = 1.0 / box_[3], inv1 = 1.0 / box_[2];
  for (int it = 0; it < 100000; ++it) {
    double x = rng.uniform(box_[0], box_[1]);
    double y = 1.0 / (inv0 + rng.uniform() * (inv1 - inv0));
    H2Point z{x, y};
    bool inside = true;
    for (int k = 0; k < 6 && inside; ++k)
      inside = side_value(hex.side[k], z) * sign_[k] > 0;
    if (inside) return flip ? apply_fast(seam_refl[0], z) : z;
  }
  fail(ErrorCode::ContractViolation, "interior sampling failed to land in the hexagon");
}

double PantsGeometry::area_mc(Rng& rng, int samples) const {
  long hits = 0;
  for (int it = 0; it < samples; ++it) {
    double x = rng.uniform(box_[0], box_[1]);
    double y = 1.0 / (1.0 / box_[3] + rng.uniform() * (1.0 / box_[2] - 1.0 / box_[3]));
    H2Point z{x, y};
    bool inside = true;
    for (int k = 0; k < 6 && inside; ++k)
      inside = side_value(hex.side[k], z) * sign_[k] > 0;
    if (inside) ++hits;
  }
  double box_area = (box_[1] - box_[0]) * (1.0 / box_[2] - 1.0 / box_[3]);
  return 2.0 * box_area * (double)hits / samples;
}

H2Point PantsGeometry::boundary_point(int i, double s) const {
  double len = boundary_len[i];
  double t = wrap_mod(s, len);
  if (t > len / 2) t -= len;
  if (half_sign[i] * t >= 0) return geodesic_point(G[i], origin_t[i] + t);
  return apply_fast(seam_refl[0], geodesic_point(G[i], origin_t[i] - t));
}

double PantsGeometry::boundary_coordinate(int i, const H2Point& p,
                                          const Motion& lift_word_inv) const {
  H2Point z = apply_fast(lift_word_inv, p);
  double raw = geodesic_coordinate(G[i], z) - origin_t[i];
  return wrap_mod(raw, boundary_len[i]);
}

void PantsGeometry::build_words(int upto) const {
  WordCache& wc = *wcache_;
  std::lock_guard<std::mutex> lk(wc.mu);
  if (wc.words.empty()) {
    wc.words.push_back({Motion{}});
    wc.last.push_back({4});
  }
  const Motion gens[4] = {A, inverse(A), B, inverse(B)};
  while ((int)wc.words.size() <= upto) {
    int len = (int)wc.words.size();
    const auto& prev = wc.words[len - 1];
    const auto& ptag = wc.last[len - 1];
    std::vector<Motion> cur;
    std::vector<std::uint8_t> tag;
    cur.reserve(prev.size() * 3 + 1);
    tag.reserve(prev.size() * 3 + 1);
    for (size_t w = 0; w < prev.size(); ++w) {
      for (std::uint8_t g = 0; g < 4; ++g) {
        if (ptag[w] != 4 && (ptag[w] ^ 1) == g) continue;
        cur.push_back(compose(prev[w], gens[g]));
        tag.push_back(g);
      }
    }
    wc.words.push_back(std::move(cur));
    wc.last.push_back(std::move(tag));
  }
}

const std::vector<Motion>& PantsGeometry::word_level(int len) const {
  build_words(len);
  std::lock_guard<std::mutex> lk(wcache_->mu);
  return wcache_->words[len];
}

const std::deque<std::vector<Motion>>& PantsGeometry::word_levels(int upto) const {
  build_words(upto);
  return wcache_->words;
}

double PantsGeometry::distance(const H2Point& p, const H2Point& q, int word_bound,
                               bool early_stop) const {
  double best = dist(p, q);
  int agree = 0;
  for (int len = 1; len <= 14; ++len) {
    double proxy = std::numeric_limits<double>::infinity();
    for (const Motion& w : word_level(len)) {
      H2Point wq = apply_fast(w, q);
      proxy = std::min(proxy, point_proxy(p, wq));
    }
    double lv = 2 * std::asinh(0.5 * std::sqrt(proxy));
    if (lv < best - 1e-9) {
      best = lv;
      agree = 0;
    } else {
      ++agree;
    }
    if (len >= word_bound && agree >= 1) break;
    if (early_stop && len >= 2 && agree >= 2) break;
  }
  return best;
}

double pants_distance(const PantsGeometry& pg, const H2Point& p, const H2Point& q,
                      int word_bound) {
  return pg.distance(p, q, word_bound);
}

// Keeps every lift within r_keep of ref.  A lift that close has its nearest
// point on the closure of some tile w*F of the universal cover, so it shows
// up among the boundary-side geodesics of a tile meeting the ball of radius
// r_keep around ref.  Tiles meeting that ball form a subtree of the free
// group (a segment back to ref stays in the ball and crosses tiles along the
// tree path), so a depth-first walk pruned by the exact tile distance is
// exhaustive.  Copy-1 sides reduce to deck translates: r12 fixes G0 and G1,
// and r12*G2 = A*G2.
void PantsGeometry::collect_lifts(double r_keep) {
  struct Arc {
    H2Geodesic g;
    double t0, t1;
  };
  std::vector<Arc> arcs;
  const Motion flip = seam_refl[0];
  for (int k : {0, 2, 3, 4, 5}) {
    const H2Geodesic& g = hex.side[k];
    double ta = geodesic_coordinate(g, hex.v[k]);
    double tb = geodesic_coordinate(g, hex.v[(k + 1) % 6]);
    arcs.push_back({g, std::min(ta, tb), std::max(ta, tb)});
  }
  auto hex_dist = [&](const H2Point& z) {
    double best = std::numeric_limits<double>::infinity();
    for (const Arc& a : arcs) {
      PointToGeodesic pd = dist_point_geodesic(z, a.g);
      double t = geodesic_coordinate(a.g, pd.foot);
      double d = pd.dist;
      if (t < a.t0)
        d = dist(z, geodesic_point(a.g, a.t0));
      else if (t > a.t1)
        d = dist(z, geodesic_point(a.g, a.t1));
      best = std::min(best, d);
    }
    return best;
  };
  // Copy-1 arcs are the flip images of the base arcs; since the flip is an
  // involutive isometry, measure the flipped query point instead.
  auto tile_dist = [&](const H2Point& z) {
    return std::min(hex_dist(z), hex_dist(apply_fast(flip, z)));
  };

  lifts_ = {};
  std::array<std::set<std::pair<long long, long long>>, 3> seen;
  size_t visited = 0;
  auto keep = [&](int i, const Motion& word) {
    H2Geodesic lg = apply(word, G[i]);
    if (dist_point_geodesic(ref, lg).dist > r_keep) return;
    auto key = std::make_pair((long long)std::llround(lg.c * 1e8),
                              lg.vertical ? LLONG_MIN : (long long)std::llround(lg.r * 1e8));
    if (!seen[i].insert(key).second) return;
    lifts_[i].push_back({lg, word, inverse(word), i});
  };
  auto consider = [&](const Motion& w) {
    keep(0, w);
    keep(1, w);
    keep(2, w);
    keep(2, compose(w, A));
  };
  consider(Motion{});

  const Motion gens[4] = {A, inverse(A), B, inverse(B)};
  const Motion ginv[4] = {inverse(A), A, inverse(B), B};
  struct Frame {
    Motion m;
    Motion minv;
    std::uint8_t last;
    std::uint8_t next;
    int len;
  };
  std::vector<Frame> stack;
  stack.push_back({Motion{}, Motion{}, 4, 0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= 4 || f.len >= 96) {
      stack.pop_back();
      continue;
    }
    std::uint8_t g = f.next++;
    if (f.last != 4 && (f.last ^ 1) == g) continue;
    Motion m = compose(f.m, gens[g]);
    Motion minv = compose(ginv[g], f.minv);
    if (tile_dist(apply_fast(minv, ref)) > r_keep + 0.1) continue;
    if (++visited > 8000000)
      fail(ErrorCode::ContractViolation, "boundary lift enumeration exploded");
    consider(m);
    stack.push_back({m, minv, g, 0, f.len + 1});
  }
  for (int i = 0; i < 3; ++i)
    if (lifts_[i].empty()) fail(ErrorCode::ContractViolation, "no boundary lifts survived");
  lift_radius_ = r_keep;
}

// Grow the kept radius until every probe's nearest-lift distance is certified
// exact (it fits inside the completeness ball) and leaves headroom for
// interior queries.
void PantsGeometry::build_lifts() {
  std::vector<H2Point> probes{ref};
  for (int k = 0; k < 6; ++k) {
    probes.push_back(hex.v[k]);
    probes.push_back(apply_fast(seam_refl[0], hex.v[k]));
  }
  double r = ref_spread + 1.5;
  for (int pass = 0; pass < 12; ++pass) {
    collect_lifts(r);
    double deepest = 0;
    bool exact = true;
    for (const H2Point& p : probes) {
      double dp = dist(ref, p);
      for (int i = 0; i < 3; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const BoundaryLift& bl : lifts_[i])
          best = std::min(best, dist_point_geodesic(p, bl.geo).dist);
        if (best + dp > r) exact = false;
        deepest = std::max(deepest, best);
      }
    }
    double need = deepest + ref_spread + 1.5;
    if (exact && need <= r) return;
    r = std::max(need, r + 1.5);
  }
  fail(ErrorCode::ContractViolation, "boundary lift radius failed to settle");
}

PantsGeometry::Projection PantsGeometry::project_to_boundary(int i, const H2Point& p) const {
  Projection best{std::numeric_limits<double>::infinity(), {}, -1};
  for (size_t k = 0; k < lifts_[i].size(); ++k) {
    PointToGeodesic pd = dist_point_geodesic(p, lifts_[i][k].geo);
    if (pd.dist < best.dist) best = {pd.dist, pd.foot, (int)k};
  }
  // Completeness: every lift nearer than best would sit within lift_radius_ of
  // ref, hence in the list.  Fails only for queries far outside the domain.
  if (dist(ref, p) + best.dist > lift_radius_ + 1e-6)
    fail(ErrorCode::ContractViolation, "projection query outside the guaranteed lift radius");
  return best;
}

PantsGeometry::NearestBoundary PantsGeometry::nearest_boundary(const H2Point& p) const {
  NearestBoundary best{-1, {std::numeric_limits<double>::infinity(), {}, -1}};
  for (int i = 0; i < 3; ++i) {
    Projection pr = project_to_boundary(i, p);
    if (pr.dist < best.proj.dist) best = {i, pr};
  }
  return best;
}

// ---------------------------------------------------------------------------
// SurfaceGeometry

double SurfaceGeometry::side_coordinate(int e, int end, double u) const {
  double len = fn.lengths[e];
  double uu = wrap_mod(u, len);
  if (end == 0) return uu;
  return wrap_mod(fn.twists[e] - uu, len);
}

double SurfaceGeometry::u_from_side(int e, int end, double s) const {
  double len = fn.lengths[e];
  if (end == 0) return wrap_mod(s, len);
  return wrap_mod(fn.twists[e] - s, len);
}

H2Point SurfaceGeometry::circle_point(int e, int end, double u) const {
  const CurveSide& cs = fn.dec.curves[e][end];
  return pants[cs.pants].boundary_point(cs.slot, side_coordinate(e, end, u));
}

SurfaceGeometry build_surface(const FNSurface& fn) {
  fn.validate();
  SurfaceGeometry sg;
  sg.fn = fn;
  sg.slots = fn.dec.slot_map();
  for (int p = 0; p < fn.dec.num_pants(); ++p) {
    std::array<double, 3> bl;
    for (int s = 0; s < 3; ++s) bl[s] = fn.lengths[sg.slots[p][s].curve];
    sg.pants.push_back(build_pants(bl[0], bl[1], bl[2]));
  }
  return sg;
}

}  // namespace grafting
