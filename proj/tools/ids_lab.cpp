// ids-lab: batch experiment driver for IDS estimators on periodic covering
// graphs with random potentials and random metrics. Subcommands scope a run
// to a single estimator; `run` executes the config's full experiment list.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "idslab/idslab.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

idslab::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw idslab::ConfigError(path, "cannot open config file");
  idslab::json j;
  try {
    in >> j;
  } catch (const idslab::json::exception& e) {
    throw idslab::ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return idslab::ExperimentConfig::from_json(j);
}

int execute(const std::string& config_path, const idslab::RunOptions& opts) {
  idslab::ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    cfg.validate();
  } catch (const idslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    idslab::RunResult result = idslab::run_experiments(cfg, opts);
    std::cout << "wrote " << result.files.size() << " artifact(s) to " << result.output_dir
              << " (manifest: " << result.manifest_path << ")\n";
    return 0;
  } catch (const idslab::Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ids-lab: integrated density of states experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  bool no_plots = false;

  auto add_common = [&](CLI::App* cmd, bool run_flags) {
    cmd->add_option("config", config_path, "experiment configuration (JSON)")->required();
    if (run_flags) {
      cmd->add_option("--seed", seed, "override the master seed");
      cmd->add_option("--workers", workers, "worker thread count");
      cmd->add_option("--out", out_dir, "output directory override");
      cmd->add_flag("--no-plots", no_plots, "skip SVG plot output");
    }
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
  add_common(validate, false);

  CLI::App* run = app.add_subcommand("run", "run every configured experiment");
  add_common(run, true);

  const char* estimators[] = {"oracle", "ids", "bracket", "wegner", "selfavg"};
  const char* blurbs[] = {"run only Bloch oracle experiments",
                          "run only exhaustion experiments",
                          "run only bracketing experiments",
                          "run only Wegner experiments",
                          "run only self-averaging experiments"};
  for (int k = 0; k < 5; ++k) add_common(app.add_subcommand(estimators[k], blurbs[k]), true);

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    try {
      load_config(config_path).validate();
      std::cout << "config OK\n";
      return 0;
    } catch (const idslab::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  idslab::RunOptions opts;
  opts.seed_override = seed;
  opts.workers_override = workers;
  opts.output_dir_override = out_dir;
  opts.plots = !no_plots;
  for (const char* name : estimators)
    if (app.get_subcommand(name)->parsed()) opts.only_estimator = name;
  return execute(config_path, opts);
}
