#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "idslab/config.hpp"
#include "idslab/csv.hpp"
#include "idslab/ids.hpp"
#include "idslab/svg.hpp"
#include "idslab/version.hpp"

namespace idslab {

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<int> workers_override;
  std::optional<std::string> output_dir_override;
  bool plots = true;
  std::optional<std::string> only_estimator;  // subcommand scoping
};

struct RunResult {
  std::string output_dir;
  std::string manifest_path;
  std::vector<std::string> files;  // CSV/JSON/SVG artifacts, manifest excluded
};

inline const char* error_kind(const Error& e) {
  if (dynamic_cast<const NotPeriodic*>(&e)) return "NotPeriodic";
  if (dynamic_cast<const InsufficientData*>(&e)) return "InsufficientData";
  if (dynamic_cast<const OracleCapExceeded*>(&e)) return "OracleCapExceeded";
  if (dynamic_cast<const PivotBreakdown*>(&e)) return "PivotBreakdown";
  if (dynamic_cast<const WindowTooSmall*>(&e)) return "WindowTooSmall";
  if (dynamic_cast<const NegativePotential*>(&e)) return "NegativePotential";
  if (dynamic_cast<const NonMonotoneSequence*>(&e)) return "NonMonotoneSequence";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  return "Error";
}

namespace run_detail {

inline int resolve_workers(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.workers_override && *opts.workers_override > 0) return *opts.workers_override;
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("IDS_LAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

inline std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  out << text;
}

inline BoundaryCondition boundary_from(const ExperimentSpec& e) {
  return e.boundary == "neumann" ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
}

}  // namespace run_detail

/// Execute the configured experiments and write one CSV (plus optional SVG)
/// per experiment, a fit JSON for Wegner runs, and a run manifest. All
/// numeric output is deterministic in (config, master seed) and independent
/// of the worker count.
inline RunResult run_experiments(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  const ModelSpec model = cfg.build_model();
  const std::uint64_t master_seed = opts.seed_override.value_or(cfg.seed);
  const int workers = run_detail::resolve_workers(cfg, opts);
  const std::string out_dir = opts.output_dir_override.value_or(cfg.output_dir);
  const std::string hash = cfg.config_hash();
  const ExecPolicy exec{workers};

  std::filesystem::create_directories(out_dir);
  RunResult result;
  result.output_dir = out_dir;

  json manifest;
  manifest["config_hash"] = hash;
  manifest["master_seed"] = master_seed;
  manifest["workers"] = workers;
  manifest["version"] = kVersion;
  manifest["started_at"] = run_detail::timestamp_utc();
  manifest["experiments"] = json::array();

  auto path_of = [&](const std::string& file) { return out_dir + "/" + file; };
  bool ran_any = false;

  for (const auto& exp : cfg.experiments) {
    if (opts.only_estimator && exp.estimator != *opts.only_estimator) continue;
    ran_any = true;
    const std::uint64_t exp_seed =
        derive_seed(master_seed, fnv1a64(exp.name.data(), exp.name.size()), 0);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> files;

    try {
      if (exp.estimator == "oracle") {
        IdsCurve curve = bloch_oracle(model, exp.lambdas, exp.theta_samples);
        curve.validate();
        CsvWriter csv(path_of(exp.name + ".csv"), hash, {"lambda", "N_value", "theta_samples"});
        for (std::size_t k = 0; k < curve.lambdas.size(); ++k)
          csv.row({format_double(curve.lambdas[k]), format_double(curve.values[k]),
                   std::to_string(exp.theta_samples)});
        files.push_back(exp.name + ".csv");
        if (opts.plots) {
          PlotSeries s{"bloch", curve.lambdas, curve.values};
          run_detail::write_text(path_of(exp.name + ".svg"),
                                 render_line_chart(exp.name, "lambda", "N", {s}));
          files.push_back(exp.name + ".svg");
        }
      } else if (exp.estimator == "ids") {
        std::vector<std::vector<GroupElement>> sets;
        for (int r : exp.radii) sets.push_back(centered_box(cfg.dimension, r));
        FolnerSequence folner(std::move(sets), "centered boxes");
        ExhaustionResult res = exhaustion_estimate(model, exp_seed, folner, exp.lambdas,
                                                   run_detail::boundary_from(exp), exec);
        CsvWriter csv(path_of(exp.name + ".csv"), hash, {"j", "lambda", "N_value"});
        for (std::size_t j = 0; j < res.curves.size(); ++j) {
          res.curves[j].validate();
          for (std::size_t k = 0; k < exp.lambdas.size(); ++k)
            csv.row({std::to_string(exp.radii[j]), format_double(res.curves[j].lambdas[k]),
                     format_double(res.curves[j].values[k])});
        }
        files.push_back(exp.name + ".csv");

        std::optional<IdsCurve> oracle;
        if (exp.compare_to_oracle)
          oracle = bloch_oracle(model, exp.lambdas, exp.oracle_theta_samples);
        {
          // boundary_per_volume supports the "not feeling the boundary"
          // diagnostic: sup errors against the oracle should stay below a
          // j-independent multiple of this ratio
          std::vector<std::string> cols{"j", "sup_delta_prev", "boundary_per_volume"};
          if (oracle) cols.push_back("sup_error_oracle");
          CsvWriter conv(path_of(exp.name + "_convergence.csv"), hash, cols);
          OmegaRealization omega = detail::realization_for(
              model, exp_seed, centered_box(cfg.dimension, exp.radii.back()));
          for (std::size_t j = 0; j < res.curves.size(); ++j) {
            CoverRegion region =
                build_region(model.cell(), centered_box(cfg.dimension, exp.radii[j]));
            const double ratio = static_cast<double>(region.crossing_bonds().size()) /
                                 volume(region, omega, model);
            std::vector<std::string> row{std::to_string(exp.radii[j]),
                                         j == 0 ? "" : format_double(res.sup_deltas[j - 1]),
                                         format_double(ratio)};
            if (oracle) row.push_back(format_double(res.curves[j].sup_distance(*oracle)));
            conv.row(row);
          }
          files.push_back(exp.name + "_convergence.csv");
        }
        if (opts.plots) {
          std::vector<PlotSeries> series;
          for (std::size_t j = 0; j < res.curves.size(); ++j)
            series.push_back(
                {"j=" + std::to_string(exp.radii[j]), res.curves[j].lambdas, res.curves[j].values});
          if (oracle) series.push_back({"bloch", oracle->lambdas, oracle->values});
          run_detail::write_text(path_of(exp.name + ".svg"),
                                 render_line_chart(exp.name, "lambda", "N", series));
          files.push_back(exp.name + ".svg");
        }
      } else if (exp.estimator == "bracket") {
        BracketingResult res =
            bracketing_bounds(model, exp.lambdas, exp.samples, exp_seed, exec);
        res.lower.validate();
        res.upper.validate();
        CsvWriter csv(path_of(exp.name + ".csv"), hash,
                      {"lambda", "lower", "lower_se", "upper", "upper_se"});
        for (std::size_t k = 0; k < exp.lambdas.size(); ++k)
          csv.row({format_double(exp.lambdas[k]), format_double(res.lower.values[k]),
                   format_double(res.lower.standard_errors[k]),
                   format_double(res.upper.values[k]),
                   format_double(res.upper.standard_errors[k])});
        files.push_back(exp.name + ".csv");
        if (opts.plots) {
          PlotSeries lo{"lower (Dirichlet)", res.lower.lambdas, res.lower.values};
          PlotSeries hi{"upper (Neumann)", res.upper.lambdas, res.upper.values};
          run_detail::write_text(path_of(exp.name + ".svg"),
                                 render_line_chart(exp.name, "lambda", "N", {lo, hi}));
          files.push_back(exp.name + ".svg");
        }
      } else if (exp.estimator == "wegner") {
        WegnerTable table = wegner_experiment(model, exp.energy, exp.epsilons, exp.box_sides,
                                              exp.samples, exp_seed, exec);
        table.validate(cfg.cell.vertices);
        CsvWriter csv(path_of(exp.name + ".csv"), hash,
                      {"epsilon", "J_size", "mean_trace", "se", "n_samples"});
        for (const auto& row : table.rows)
          csv.row({format_double(row.epsilon), std::to_string(row.j_size),
                   format_double(row.mean_trace), format_double(row.standard_error),
                   std::to_string(row.samples)});
        files.push_back(exp.name + ".csv");
        json fit;
        fit["energy"] = table.energy;
        fit["log_c"] = table.fit.log_c;
        fit["alpha"] = table.fit.alpha;
        fit["alpha_se"] = table.fit.alpha_se;
        fit["alpha_ci"] = {table.fit.alpha_ci_lo, table.fit.alpha_ci_hi};
        fit["beta"] = table.fit.beta;
        fit["beta_se"] = table.fit.beta_se;
        fit["beta_ci"] = {table.fit.beta_ci_lo, table.fit.beta_ci_hi};
        fit["r_squared"] = table.fit.r_squared;
        fit["rows_used"] = table.fit.rows_used;
        fit["holder_consistent"] = table.fit.holder_consistent();
        if (table.fit.holder_consistent())
          fit["holder_exponent"] = table.fit.alpha;
        else
          fit["holder_exponent"] = nullptr;
        fit["config_hash"] = hash;
        run_detail::write_text(path_of(exp.name + "_fit.json"), fit.dump(2) + "\n");
        files.push_back(exp.name + "_fit.json");
        if (opts.plots) {
          std::vector<PlotSeries> series;
          for (int side : exp.box_sides) {
            PlotSeries s;
            s.label = "|J|^(1/d)=" + std::to_string(side);
            for (const auto& row : table.rows)
              if (row.j_size == static_cast<long>(std::llround(
                                    std::pow(static_cast<double>(side), cfg.dimension)))) {
                s.x.push_back(row.epsilon);
                s.y.push_back(row.mean_trace);
              }
            series.push_back(s);
          }
          run_detail::write_text(
              path_of(exp.name + ".svg"),
              render_line_chart(exp.name, "epsilon", "mean trace", series, true, true));
          files.push_back(exp.name + ".svg");
        }
      } else if (exp.estimator == "selfavg") {
        auto rows = self_averaging(model, exp.lambda, exp.radii, exp.samples, exp_seed, exec);
        CsvWriter csv(path_of(exp.name + ".csv"), hash,
                      {"j", "lambda", "mean", "variance", "n_samples"});
        for (const auto& row : rows)
          csv.row({std::to_string(row.radius), format_double(exp.lambda),
                   format_double(row.mean), format_double(row.variance),
                   std::to_string(row.samples)});
        files.push_back(exp.name + ".csv");
        if (opts.plots) {
          PlotSeries s;
          s.label = "variance";
          for (const auto& row : rows) {
            s.x.push_back(row.radius);
            s.y.push_back(row.variance);
          }
          run_detail::write_text(path_of(exp.name + ".svg"),
                                 render_line_chart(exp.name, "j", "variance", {s}));
          files.push_back(exp.name + ".svg");
        }
      }
    } catch (const Error& e) {
      throw Error("experiment '" + exp.name + "' failed [" + error_kind(e) + "]: " + e.what());
    } catch (const std::exception& e) {
      throw Error("experiment '" + exp.name + "' failed: " + e.what());
    }

    const auto t1 = std::chrono::steady_clock::now();
    json entry;
    entry["name"] = exp.name;
    entry["estimator"] = exp.estimator;
    entry["seed"] = exp_seed;
    entry["files"] = files;
    entry["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    manifest["experiments"].push_back(entry);
    for (auto& f : files) result.files.push_back(path_of(f));
  }

  if (opts.only_estimator && !ran_any)
    throw Error("no experiment with estimator '" + *opts.only_estimator + "' in config");

  result.manifest_path = path_of("manifest.json");
  run_detail::write_text(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

}  // namespace idslab
