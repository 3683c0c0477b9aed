#include "grafting/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "grafting/errors.hpp"
#include "json.hpp"

namespace grafting {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) bad(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

const json& member(const json& obj, const char* where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(std::string(where) + ": missing key \"" + key + "\"");
  return *it;
}

double number_field(const json& obj, const char* where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_number()) bad(std::string(where) + "." + key + ": expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) bad(std::string(where) + "." + key + ": not finite");
  return x;
}

std::int64_t integer_field(const json& obj, const char* where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_number_integer()) bad(std::string(where) + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string string_field(const json& obj, const char* where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_string()) bad(std::string(where) + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& obj, const char* where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_array()) bad(std::string(where) + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) bad(std::string(where) + "." + key + ": expected an array of numbers");
    double x = e.get<double>();
    if (!std::isfinite(x)) bad(std::string(where) + "." + key + ": entry not finite");
    out.push_back(x);
  }
  return out;
}

bool known_experiment(const std::string& name) {
  for (const char* n :
       {"area", "degraft", "spine", "deflate-rate", "slimness", "cantor", "hexagon-lemmas"})
    if (name == n) return true;
  return false;
}

}  // namespace

PantsDecomposition ExperimentConfig::dec() const {
  if (decomposition == "genus2-standard") return PantsDecomposition::genus2_standard();
  if (decomposition == "genus2-loops") return PantsDecomposition::genus2_loops();
  if (decomposition == "genus3-linear") return PantsDecomposition::genus3_linear();
  bad("surface.decomposition: unknown name \"" + decomposition + "\"");
}

FNSurface ExperimentConfig::surface() const {
  FNSurface fn{dec(), lengths, twists};
  fn.validate();
  return fn;
}

WeightedMulticurve ExperimentConfig::multicurve() const { return {weights}; }

void ExperimentConfig::validate() const {
  if (!known_experiment(experiment)) bad("experiment.name: unknown name \"" + experiment + "\"");
  if (output.empty()) bad("output: must be a nonempty path");
  if (net_step <= 0) bad("experiment.netStep: must be positive");
  if (grid_step <= 0) bad("experiment.gridStep: must be positive");
  if (ts.empty()) bad("experiment.ts: must be nonempty");
  for (double t : ts)
    if (t <= 0) bad("experiment.ts: entries must be positive");
  if (n_pairs < 0) bad("experiment.nPairs: must be positive");

  bool needs_surface = experiment == "area" || experiment == "spine" || experiment == "degraft" ||
                       experiment == "deflate-rate" || experiment == "slimness";
  bool needs_multicurve = experiment == "degraft" || experiment == "deflate-rate" ||
                          experiment == "slimness";
  if (needs_surface && !has_surface) bad("experiment \"" + experiment + "\" needs a surface block");
  if (needs_multicurve && !has_multicurve)
    bad("experiment \"" + experiment + "\" needs a multicurve block");

  if (has_surface) {
    PantsDecomposition d = dec();
    if (genus != d.genus)
      bad("surface.genus: " + std::to_string(genus) + " does not match decomposition \"" +
          decomposition + "\"");
    size_t nc = (size_t)d.num_curves();
    if (lengths.size() != nc)
      bad("surface.lengths: expected " + std::to_string(nc) + " entries, got " +
          std::to_string(lengths.size()));
    if (twists.size() != nc)
      bad("surface.twists: expected " + std::to_string(nc) + " entries, got " +
          std::to_string(twists.size()));
    for (double l : lengths)
      if (l <= 0) bad("surface.lengths: entries must be positive");
  }
  if (has_multicurve) {
    if (!has_surface) bad("multicurve block needs a surface block");
    size_t nc = (size_t)dec().num_curves();
    if (weights.size() != nc)
      bad("multicurve.weights: expected " + std::to_string(nc) + " entries, got " +
          std::to_string(weights.size()));
    for (double w : weights)
      if (w < 0) bad("multicurve.weights: entries must be nonnegative");
    bool full_support = true;
    for (double w : weights)
      if (w == 0) full_support = false;
    if (!full_support && (experiment == "deflate-rate" || experiment == "slimness"))
      bad("experiment \"" + experiment + "\" needs every weight positive");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("top level: expected an object");
  reject_unknown(root, "top level", {"surface", "multicurve", "experiment", "output"});

  ExperimentConfig cfg;

  if (root.contains("surface")) {
    const json& s = root["surface"];
    if (!s.is_object()) bad("surface: expected an object");
    reject_unknown(s, "surface", {"genus", "decomposition", "lengths", "twists"});
    cfg.has_surface = true;
    cfg.genus = (int)integer_field(s, "surface", "genus");
    cfg.decomposition = string_field(s, "surface", "decomposition");
    cfg.lengths = number_array(s, "surface", "lengths");
    cfg.twists = number_array(s, "surface", "twists");
  }

  if (root.contains("multicurve")) {
    const json& m = root["multicurve"];
    if (!m.is_object()) bad("multicurve: expected an object");
    reject_unknown(m, "multicurve", {"weights"});
    cfg.has_multicurve = true;
    cfg.weights = number_array(m, "multicurve", "weights");
  }

  const json& e = member(root, "top level", "experiment");
  if (!e.is_object()) bad("experiment: expected an object");
  reject_unknown(e, "experiment", {"name", "nPairs", "netStep", "ts", "gridStep", "seed"});
  cfg.experiment = string_field(e, "experiment", "name");
  if (e.contains("nPairs")) {
    std::int64_t n = integer_field(e, "experiment", "nPairs");
    if (n < 1) bad("experiment.nPairs: must be positive");
    cfg.n_pairs = (int)n;
  }
  if (e.contains("netStep")) cfg.net_step = number_field(e, "experiment", "netStep");
  if (e.contains("ts")) cfg.ts = number_array(e, "experiment", "ts");
  if (e.contains("gridStep")) cfg.grid_step = number_field(e, "experiment", "gridStep");
  if (e.contains("seed")) {
    std::int64_t s = integer_field(e, "experiment", "seed");
    if (s < 0) bad("experiment.seed: must be nonnegative");
    cfg.seed = (std::uint64_t)s;
  }

  cfg.output = string_field(root, "top level", "output");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace grafting
