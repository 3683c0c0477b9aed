#include "grafting/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "grafting/cantor.hpp"
#include "grafting/csv.hpp"
#include "grafting/deflation.hpp"
#include "grafting/errors.hpp"
#include "grafting/inflation.hpp"
#include "grafting/net.hpp"
#include "grafting/parallel.hpp"
#include "grafting/spine.hpp"

namespace grafting {

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double mid(const DistanceResult& r) { return (r.lower + r.upper) / 2; }

// ---------------------------------------------------------------------------
// area: random FN/weight configurations on the configured decomposition.
// The closed-form column sums the pieces (2 pi per pants, circumference x
// height per cylinder); the Monte-Carlo column replaces every 2 pi with a
// rejection-sampled hexagon area, so it checks the realized geometry.

ExperimentResult run_area(const ExperimentConfig& cfg) {
  PantsDecomposition dec = cfg.dec();
  int n_configs = cfg.pairs_or(20);
  const int mc_samples = 1000000;
  Rng rng = Rng::stream(cfg.seed, "area");

  Csv csv({"genus", "idx", "partsSum", "formula", "absError", "mcEstimate", "mcRelError"});
  double worst_abs = 0, worst_mc = 0;
  for (int i = 0; i < n_configs; ++i) {
    int nc = dec.num_curves();
    FNSurface fn{dec, {}, {}};
    WeightedMulticurve mu = WeightedMulticurve::zero(nc);
    for (int e = 0; e < nc; ++e) {
      fn.lengths.push_back(rng.uniform(1.0, 3.0));
      fn.twists.push_back(rng.uniform(0.0, fn.lengths.back()));
      mu.weights[e] = rng.uniform(0.2, 1.5);
    }
    GraftedComplex g = graft(fn, mu);

    double parts = area(g);
    double formula = 2 * M_PI * (2 * dec.genus - 2) + length_of_lamination(fn, mu);
    double abs_err = std::abs(parts - formula);

    int per = mc_samples / dec.num_pants();
    double mc = 0;
    for (const PantsGeometry& pg : g.geom.pants) mc += pg.area_mc(rng, per);
    for (const FlatCylinder& c : g.cylinders) mc += c.circumference * c.height;
    double mc_rel = std::abs(mc - formula) / formula;

    worst_abs = std::max(worst_abs, abs_err);
    worst_mc = std::max(worst_mc, mc_rel);
    csv.row({Csv::num((long long)dec.genus), Csv::num((long long)i), Csv::num(parts),
             Csv::num(formula), Csv::num(abs_err), Csv::num(mc), Csv::num(mc_rel)});
  }

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = worst_abs < 1e-9 && worst_mc < 0.01;
  res.notes.push_back("worst closed-form error " + fmt("%.3g", worst_abs));
  res.notes.push_back("worst Monte-Carlo relative error " + fmt("%.3g", worst_mc));
  return res;
}

// ---------------------------------------------------------------------------
// spine: the first pants of the surface, checked at two grid refinements.

ExperimentResult run_spine(const ExperimentConfig& cfg) {
  auto sm = cfg.dec().slot_map();
  std::array<double, 3> L;
  for (int j = 0; j < 3; ++j) L[j] = cfg.lengths[sm[0][j].curve];

  PantsGeometry pg = build_pants(L[0], L[1], L[2]);
  RibbonSpine sp = pants_spine(pg);
  const char* kind = sp.kind == RibbonSpine::Kind::Theta      ? "theta"
                     : sp.kind == RibbonSpine::Kind::Dumbbell ? "dumbbell"
                                                              : "figure-eight";

  Csv csv({"gridStep", "maxRidgeDeviation", "maxArcDeviation", "maxTransitionJump", "kind"});
  bool ok = true;
  for (double h : {cfg.grid_step, cfg.grid_step / 2}) {
    SpineCheckRow r = verify_spine(pg, sp, h);
    ok = ok && r.max_ridge_dev <= 2 * h && r.max_arc_dev <= 2 * h;
    csv.row({Csv::num(r.grid_step), Csv::num(r.max_ridge_dev), Csv::num(r.max_arc_dev),
             Csv::num(r.max_transition_jump), kind});
  }

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = ok;
  res.notes.push_back(std::string("spine kind ") + kind + ", inradius " +
                      fmt("%.6g", sp.inradius));
  return res;
}

// ---------------------------------------------------------------------------
// degraft: the multicurve weights scaled by each s in ts.  Pairs are sampled
// once on the bare surface and reused at every s, so the sup differences are
// directly comparable across rows.

ExperimentResult run_degraft(const ExperimentConfig& cfg, int jobs) {
  FNSurface fn = cfg.surface();
  WeightedMulticurve mu = cfg.multicurve();
  int n_pairs = cfg.pairs_or(300);
  Rng rng = Rng::stream(cfg.seed, "degraft");

  GraftedComplex X = graft(fn, WeightedMulticurve::zero(fn.dec.num_curves()));
  DistanceNet net_x(X, cfg.net_step, 60000, jobs);

  std::vector<std::array<SurfacePoint, 2>> pairs(n_pairs);
  for (auto& pr : pairs) {
    pr[0] = sample_point(X, rng);
    pr[1] = sample_point(X, rng);
  }
  std::vector<DistanceResult> dx(n_pairs);
  parallel_for(n_pairs, jobs, [&](std::size_t i) { dx[i] = net_x.query(pairs[i][0], pairs[i][1]); });

  struct Row {
    double s, sup_mid, sup_up;
    long long violations;
  };
  std::vector<Row> rows;
  for (double s : cfg.ts) {
    WeightedMulticurve scaled = mu;
    for (double& w : scaled.weights) w *= s;
    GraftedComplex g = graft(fn, scaled);
    DistanceNet net(g, cfg.net_step, 60000, jobs);

    std::vector<double> diff_mid(n_pairs), diff_up(n_pairs);
    std::vector<int> viol(n_pairs, 0);
    parallel_for(n_pairs, jobs, [&](std::size_t i) {
      SurfacePoint p = pairs[i][0], q = pairs[i][1];
      p.piece = g.piece_of_pants[p.pants];
      q.piece = g.piece_of_pants[q.pants];
      DistanceResult gr = net.query(p, q);
      diff_mid[i] = std::max(0.0, mid(gr) - mid(dx[i]));
      diff_up[i] = gr.upper - dx[i].lower;
      if (gr.upper < dx[i].upper - 4 * net_x.step() - 1e-9) viol[i] = 1;
    });
    Row r{s, 0, 0, 0};
    for (int i = 0; i < n_pairs; ++i) {
      r.sup_mid = std::max(r.sup_mid, diff_mid[i]);
      r.sup_up = std::max(r.sup_up, diff_up[i]);
      r.violations += viol[i];
    }
    rows.push_back(r);
  }

  size_t tail = std::min<size_t>(3, rows.size());
  std::vector<double> xs, ys;
  for (size_t i = rows.size() - tail; i < rows.size(); ++i) {
    xs.push_back(rows[i].s);
    ys.push_back(rows[i].sup_mid);
  }
  double slope = fit_slope(xs, ys);

  Csv csv({"s", "supDiffMid", "supDiffUpper", "violations", "slope"});
  long long total_viol = 0;
  for (const Row& r : rows) {
    total_viol += r.violations;
    csv.row({Csv::num(r.s), Csv::num(r.sup_mid), Csv::num(r.sup_up), Csv::num(r.violations),
             Csv::num(slope)});
  }

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = total_viol == 0;
  res.notes.push_back("lower-bound violations: " + std::to_string(total_viol));
  res.notes.push_back("sup-difference slope over the last points: " + fmt("%.4g", slope));
  return res;
}

// ---------------------------------------------------------------------------
// deflate-rate: distortion between the unit-area ray surface and its
// deflation, per t, with the log-log rate fit in the slope column.

ExperimentResult run_deflate_rate(const ExperimentConfig& cfg, int jobs) {
  GraftedComplex g = graft(cfg.surface(), cfg.multicurve());
  FlatSeed seed = seed_of(deflate(g));
  int n_pairs = cfg.pairs_or(500);
  Rng rng = Rng::stream(cfg.seed, "deflate-rate");

  std::vector<ConvergenceRow> rows =
      convergence_experiment(seed, cfg.ts, n_pairs, cfg.net_step, rng, jobs);

  std::vector<double> xs, ys;
  for (const ConvergenceRow& r : rows)
    if (r.max_abs_upper > 0) {
      xs.push_back(std::log(r.t));
      ys.push_back(std::log(r.max_abs_upper));
    }
  double slope = xs.size() >= 2 ? fit_slope(xs, ys) : 0.0;

  Csv csv({"t", "k", "lXlambda", "nPairs", "netStep", "maxAbsLower", "maxAbsUpper", "surjSlack",
           "slim", "slope"});
  for (const ConvergenceRow& r : rows)
    csv.row({Csv::num(r.t), Csv::num(r.k), Csv::num(r.l_lambda), Csv::num((long long)n_pairs),
             Csv::num(cfg.net_step), Csv::num(r.max_abs_lower), Csv::num(r.max_abs_upper),
             Csv::num(r.surj_slack), Csv::num(r.slim), Csv::num(slope)});

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = rows.size() == cfg.ts.size();
  res.notes.push_back("log-log slope of maxAbsUpper vs t: " + fmt("%.4g", slope));
  return res;
}

// ---------------------------------------------------------------------------
// slimness: scaled inradius of the fattest hyperbolic piece along the ray,
// reported next to its product with the normalization scale.

ExperimentResult run_slimness(const ExperimentConfig& cfg) {
  GraftedComplex g = graft(cfg.surface(), cfg.multicurve());
  FlatSeed seed = seed_of(deflate(g));

  Csv csv({"t", "k", "slim", "slimTimesK"});
  double first = 0, last = 0;
  bool have_first = false;
  for (double t : cfg.ts) {
    GraftedComplex ray = inflation_ray(seed, t);
    double l_lam = length_of_lamination(ray.geom.fn, ray.mu);
    double kt = std::sqrt(l_lam);
    double slim = slimness_check(rescale(ray, 1.0 / kt));
    if (!have_first) {
      first = slim * kt;
      have_first = true;
    }
    last = slim * kt;
    csv.row({Csv::num(t), Csv::num(kt), Csv::num(slim), Csv::num(slim * kt)});
  }

  ExperimentResult res;
  res.csv = csv.text();
  res.notes.push_back("slim*k runs from " + fmt("%.10g", first) + " to " + fmt("%.10g", last) +
                      "; the ideal-triangle limit is " + fmt("%.10g", std::atanh(0.5)));
  return res;
}

// ---------------------------------------------------------------------------
// cantor: the ternary middle-third measure over a depth sweep.

ExperimentResult run_cantor(const ExperimentConfig& cfg) {
  (void)cfg;
  CantorMeasure m = CantorMeasure::ternary();
  Csv csv({"depth", "pushforwardError", "netError"});
  std::vector<double> pe;
  double last_pe = 0, last_ne = 0;
  for (int depth : {2, 4, 6, 8, 10, 12}) {
    Graft1D g = graft1d(m, depth);
    last_pe = pushforward_error(g, 100);
    last_ne = net_error(g, 1e-3);
    pe.push_back(last_pe);
    csv.row({Csv::num((long long)depth), Csv::num(last_pe), Csv::num(last_ne)});
  }

  bool nonincreasing = true;
  for (size_t i = 1; i < pe.size(); ++i)
    if (pe[i] > pe[i - 1] + 1e-15) nonincreasing = false;

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = last_pe < 1e-3 && last_ne < 1e-3 && nonincreasing;
  res.notes.push_back("depth-12 pushforward error " + fmt("%.3g", last_pe) + ", net error " +
                      fmt("%.3g", last_ne));
  return res;
}

// ---------------------------------------------------------------------------
// hexagon-lemmas: random right-angled hexagons (closure residuals) and random
// strip regions (area against the 2*delta*h0 bound).

ExperimentResult run_hexagon(const ExperimentConfig& cfg) {
  int n = cfg.pairs_or(100);
  Rng rng = Rng::stream(cfg.seed, "hexagon-lemmas");
  H2Geodesic axis{true, 0, 1, 1};

  Csv csv({"idx", "hexClosure", "stripArea", "stripBound", "stripMargin"});
  double worst_closure = 0, worst_margin = 1e300;
  int attempts = 0;
  for (int i = 0; i < n; ++i) {
    Hexagon hex = right_hexagon(rng.uniform(0.5, 2.5), rng.uniform(0.5, 2.5),
                                rng.uniform(0.5, 2.5));
    worst_closure = std::max(worst_closure, hex.closure);

    for (;;) {
      if (++attempts > 100 * n)
        fail(ErrorCode::ContractViolation, "strip sampling kept hitting invalid regions");
      double rl = std::exp(rng.uniform(std::log(0.2), std::log(2.0)));
      double cl = rl + std::exp(rng.uniform(std::log(0.3), std::log(4.0)));
      H2Geodesic l{false, cl, rl, 1};
      CommonPerpendicular cp = common_perpendicular(axis, l);
      double t0 = geodesic_coordinate(axis, cp.foot1) + rng.uniform(-0.1, 0.1);
      double delta = rng.uniform(0.02, 0.3);
      try {
        TrapeziumCheck tc = trapezium_area_check(axis, l, t0, delta);
        worst_margin = std::min(worst_margin, tc.margin);
        csv.row({Csv::num((long long)i), Csv::num(hex.closure), Csv::num(tc.area),
                 Csv::num(tc.bound), Csv::num(tc.margin)});
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidRegion) throw;
      }
    }
  }

  ExperimentResult res;
  res.csv = csv.text();
  res.ok = worst_closure < 1e-10 && worst_margin >= -1e-6;
  res.notes.push_back("worst hexagon closure " + fmt("%.3g", worst_closure));
  res.notes.push_back("worst strip margin " + fmt("%.3g", worst_margin));
  return res;
}

}  // namespace

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = (double)x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0) return 0;
  return (n * sxy - sx * sy) / den;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (cfg.experiment == "area") return run_area(cfg);
  if (cfg.experiment == "spine") return run_spine(cfg);
  if (cfg.experiment == "degraft") return run_degraft(cfg, jobs);
  if (cfg.experiment == "deflate-rate") return run_deflate_rate(cfg, jobs);
  if (cfg.experiment == "slimness") return run_slimness(cfg);
  if (cfg.experiment == "cantor") return run_cantor(cfg);
  return run_hexagon(cfg);
}

}  // namespace grafting
