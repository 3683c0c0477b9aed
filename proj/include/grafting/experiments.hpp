#pragma once

#include <string>
#include <vector>

#include "grafting/config.hpp"

namespace grafting {

// Output of one experiment run: the finished CSV text (header row first,
// %.17g numbers, '\n' line ends), human-readable summary lines, and whether
// the experiment's own contract held.  The CSV is always complete, also when
// ok is false, so a failing run still leaves the data to inspect.
struct ExperimentResult {
  std::string csv;
  std::vector<std::string> notes;
  bool ok = true;
};

// Dispatch on cfg.experiment.  Deterministic given cfg.seed, including across
// jobs counts: samples are drawn sequentially up front and worker threads only
// fill preassigned row slots.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Least-squares slope of y against x.  Helper for the rate fits; exposed for
// the acceptance checks.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace grafting
