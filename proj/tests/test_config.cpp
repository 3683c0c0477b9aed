#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "grafting/config.hpp"
#include "grafting/errors.hpp"
#include "grafting/experiments.hpp"

using namespace grafting;

namespace {

const char* kGood = R"({
  "surface": {
    "genus": 2,
    "decomposition": "genus2-standard",
    "lengths": [2.0, 2.5, 3.0],
    "twists": [0.1, 0.4, 0.9]
  },
  "multicurve": {"weights": [0.5, 0.7, 0.9]},
  "experiment": {"name": "degraft", "nPairs": 5, "netStep": 0.4, "seed": 3},
  "output": "out.csv"
})";

bool rejected(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code() == ErrorCode::ConfigError;
  }
  return false;
}

std::string patched(const std::string& from, const std::string& to) {
  std::string s = kGood;
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("well-formed config round-trips into typed fields") {
  ExperimentConfig cfg = parse_config(kGood);
  CHECK(cfg.experiment == "degraft");
  CHECK(cfg.n_pairs == 5);
  CHECK(cfg.net_step == 0.4);
  CHECK(cfg.seed == 3);
  CHECK(cfg.output == "out.csv");
  CHECK(cfg.surface().lengths[2] == 3.0);
  CHECK(cfg.multicurve().weights[1] == 0.7);
  CHECK(cfg.ts.size() == 4);
  cfg.validate();
}

TEST_CASE("malformed json and unknown keys are config errors") {
  CHECK(rejected("not json at all"));
  CHECK(rejected(patched("\"output\"", "\"outputs\"")));
  CHECK(rejected(patched("\"genus\"", "\"genuses\"")));
  CHECK(rejected(patched("\"weights\"", "\"weight\"")));
  CHECK(rejected(patched("\"nPairs\"", "\"npairs\"")));
}

TEST_CASE("missing and ill-typed fields are config errors") {
  CHECK(rejected(patched("\"output\": \"out.csv\"", "\"output\": \"\"")));
  CHECK(rejected(patched("\"name\": \"degraft\"", "\"name\": 7")));
  CHECK(rejected(patched("\"name\": \"degraft\"", "\"name\": \"no-such-run\"")));
  CHECK(rejected(patched("[2.0, 2.5, 3.0]", "[2.0, \"x\", 3.0]")));
  CHECK(rejected(patched("\"nPairs\": 5", "\"nPairs\": 2.5")));
  CHECK(rejected(patched("\"netStep\": 0.4", "\"netStep\": 0")));
  CHECK(rejected(patched("\"seed\": 3", "\"seed\": -1")));
}

TEST_CASE("surface shape must be consistent") {
  CHECK(rejected(patched("\"genus\": 2", "\"genus\": 3")));
  CHECK(rejected(patched("[2.0, 2.5, 3.0]", "[2.0, 2.5]")));
  CHECK(rejected(patched("[2.0, 2.5, 3.0]", "[2.0, -2.5, 3.0]")));
  CHECK(rejected(patched("[0.1, 0.4, 0.9]", "[0.1, 0.4]")));
  CHECK(rejected(patched("[0.5, 0.7, 0.9]", "[0.5, 0.7]")));
  CHECK(rejected(patched("[0.5, 0.7, 0.9]", "[0.5, -0.7, 0.9]")));
}

TEST_CASE("experiments declare the blocks they need") {
  std::string no_mu = kGood;
  auto pos = no_mu.find("  \"multicurve\"");
  no_mu.erase(pos, no_mu.find("\n", pos) + 1 - pos);
  CHECK(rejected(no_mu));

  CHECK_NOTHROW(parse_config(patched("\"name\": \"degraft\"", "\"name\": \"cantor\"")));
  CHECK(rejected(patched("\"name\": \"degraft\", \"nPairs\": 5, \"netStep\": 0.4",
                         "\"name\": \"deflate-rate\", \"ts\": [1.0, 0.5, 0.0]")));
}

TEST_CASE("full support is required where a cylinder per curve is assumed") {
  std::string zero_weight = patched("[0.5, 0.7, 0.9]", "[0.5, 0.0, 0.9]");
  CHECK_NOTHROW(parse_config(zero_weight));  // degraft tolerates collapsed curves

  auto pos = zero_weight.find("\"degraft\"");
  REQUIRE(pos != std::string::npos);
  zero_weight.replace(pos, 9, "\"deflate-rate\"");
  CHECK(rejected(zero_weight));
}

TEST_CASE("repeated runs emit identical bytes") {
  ExperimentConfig cfg = parse_config(kGood);
  ExperimentResult a = run_experiment(cfg, 1);
  ExperimentResult b = run_experiment(cfg, 1);
  CHECK(a.csv == b.csv);
  CHECK(a.ok);
}

TEST_CASE("jobs count does not change the bytes") {
  ExperimentConfig cfg = parse_config(kGood);
  ExperimentResult a = run_experiment(cfg, 1);
  ExperimentResult c = run_experiment(cfg, 2);
  CHECK(a.csv == c.csv);
}

TEST_CASE("cheap experiments are deterministic too") {
  ExperimentConfig cfg = parse_config(kGood);
  cfg.experiment = "hexagon-lemmas";
  cfg.n_pairs = 8;
  std::string a = run_experiment(cfg, 1).csv;
  std::string b = run_experiment(cfg, 1).csv;
  CHECK(a == b);
  cfg.experiment = "cantor";
  CHECK(run_experiment(cfg, 1).csv == run_experiment(cfg, 1).csv);
}
