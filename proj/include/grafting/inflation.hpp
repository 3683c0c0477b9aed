#pragma once

#include <array>
#include <vector>

#include "grafting/deflation.hpp"

namespace grafting {

// A deflated complex carrying the pants labelling needed to invert it:
// arc_from[a] is the pants and boundary slot that produced flat arc a.  The
// scale k satisfies k^2 = flat area, so flat / k is the unit-area shape.
struct FlatSeed {
  FlatComplex flat;
  PantsDecomposition dec;
  std::vector<std::array<int, 2>> arc_from;
  double k = 0;

  FlatComplex unit_flat() const;
};

FlatSeed seed_of(const Deflation& d);

// Multiply every flat dimension (circumferences, heights, arc positions and
// lengths) by the factor.  Cone data is size-independent and kept.
FlatComplex scale_flat(const FlatComplex& f, double factor);

// Recover the grafted complex whose deflation is the seed: curve lengths from
// circumferences, weights from heights, twists from the arc offsets.  The arc
// widths must solve the per-pants linear system for the labelled spine type.
GraftedComplex inflate(const FlatSeed& seed);

// Gr(X(t), mu/t): lengths, twists and weights all divided by t, so the twist
// fractions and the flat shape stay constant while the flat part dominates as
// t shrinks.  t = 1 reproduces inflate(seed).
GraftedComplex inflation_ray(const FlatSeed& seed, double t);

struct ConvergenceRow {
  double t;
  double k;         // unit-area normalization scale at this t
  double l_lambda;  // lamination length of the ray surface, equals k^2
  double max_abs_lower;
  double max_abs_upper;
  double surj_slack;
  double slim;
};

// For each t: build the ray surface, rescale its flat part to unit area,
// deflate, and measure sampled distortion between the surface and its
// deflation.  Rows come out in the order of ts.
std::vector<ConvergenceRow> convergence_experiment(const FlatSeed& seed,
                                                   const std::vector<double>& ts, int n_pairs,
                                                   double net_step, Rng& rng, int jobs = 1);

}  // namespace grafting
