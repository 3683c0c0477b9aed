#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "grafting/config.hpp"
#include "grafting/deflation.hpp"
#include "grafting/errors.hpp"
#include "grafting/experiments.hpp"

namespace {

namespace fs = std::filesystem;
using namespace grafting;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError: return 2;
    case ErrorCode::BudgetExceeded: return 3;
    default: return 1;
  }
}

// Relative paths land in the output directory (--out-dir, else GRAFT_OUT_DIR,
// else the working directory); absolute paths are used as given.
fs::path resolve_out(const std::string& out_dir, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  return fs::path(out_dir) / p;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigError, "cannot open output file \"" + path.string() + "\"");
  out << text;
  if (!out) fail(ErrorCode::ContractViolation, "write failed for \"" + path.string() + "\"");
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool seed_set,
            std::uint64_t seed, int jobs) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed_set) cfg.seed = seed;
  ExperimentResult res = run_experiment(cfg, jobs);
  fs::path out = resolve_out(out_dir, cfg.output);
  write_text(out, res.csv);
  for (const std::string& n : res.notes) std::cout << n << "\n";
  std::cout << "wrote " << out.string() << "\n";
  if (!res.ok) {
    std::cerr << "experiment contract violated; see " << out.string() << "\n";
    return 1;
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  ExperimentConfig cfg = load_config(config_path);
  std::cout << "config ok: experiment " << cfg.experiment << ", output " << cfg.output << "\n";
  return 0;
}

int cmd_export_flat(const std::string& config_path, const std::string& out_path,
                    const std::string& out_dir) {
  ExperimentConfig cfg = load_config(config_path);
  if (!cfg.has_surface || !cfg.has_multicurve)
    fail(ErrorCode::ConfigError, "export-flat needs surface and multicurve blocks");
  for (double w : cfg.weights)
    if (w <= 0) fail(ErrorCode::ConfigError, "export-flat needs every weight positive");
  Deflation d = deflate(graft(cfg.surface(), cfg.multicurve()));
  std::ostringstream text;
  write_flat(d.flat, text);
  fs::path out = resolve_out(out_dir, out_path);
  write_text(out, text.str());
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grafted-surface experiment driver"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int jobs = 1;
  const char* env_dir = std::getenv("GRAFT_OUT_DIR");
  std::string out_dir = env_dir ? env_dir : ".";
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "override the config seed")->expected(1);
  app.add_option("--jobs", jobs, "worker threads for the samplers")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir,
                 "directory for relative output paths (default: GRAFT_OUT_DIR or '.')");

  std::string run_config, validate_config, export_config, export_out;
  CLI::App* run = app.add_subcommand("run", "run the configured experiment, write its CSV");
  run->fallthrough();
  run->add_option("config", run_config, "experiment config file")->required();
  CLI::App* validate = app.add_subcommand("validate", "check a config file and exit");
  validate->fallthrough();
  validate->add_option("config", validate_config, "experiment config file")->required();
  CLI::App* exp = app.add_subcommand("export-flat", "deflate the surface, write the flat file");
  exp->fallthrough();
  exp->add_option("config", export_config, "experiment config file")->required();
  exp->add_option("out", export_out, "flat-surface output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, out_dir, seed_opt->count() > 0, seed, jobs);
    if (validate->parsed()) return cmd_validate(validate_config);
    return cmd_export_flat(export_config, export_out, out_dir);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
