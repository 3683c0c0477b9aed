#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grafting/grafting.hpp"

namespace grafting {

// Parsed experiment configuration.  The file is JSON with four top-level
// entries: "surface", "multicurve", "experiment", "output".  Unknown keys are
// rejected anywhere, so typos fail loudly instead of silently running with a
// default.  Which blocks are required depends on the experiment; see
// validate() for the rules.
struct ExperimentConfig {
  bool has_surface = false;
  int genus = 2;
  std::string decomposition;  // genus2-standard | genus2-loops | genus3-linear
  std::vector<double> lengths;
  std::vector<double> twists;

  bool has_multicurve = false;
  std::vector<double> weights;

  std::string experiment;  // area | degraft | spine | deflate-rate | slimness |
                           // cantor | hexagon-lemmas
  int n_pairs = 0;         // 0: use the experiment's default
  double net_step = 0.02;
  std::vector<double> ts{1.0, 0.5, 0.25, 0.125};
  double grid_step = 0.01;
  std::uint64_t seed = 1;

  std::string output;  // CSV path, resolved against the output directory

  PantsDecomposition dec() const;
  FNSurface surface() const;
  WeightedMulticurve multicurve() const;
  int pairs_or(int dflt) const { return n_pairs > 0 ? n_pairs : dflt; }

  // Cross-field rules: block presence per experiment, sizes against the
  // decomposition, positivity.  ConfigError on any violation.
  void validate() const;
};

// Both fail with ConfigError: on JSON syntax errors, unknown or missing keys,
// wrong types, or validate() violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace grafting
