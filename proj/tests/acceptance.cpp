// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "idslab/idslab.hpp"

#include "test_models.hpp"

using namespace idslab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_seconds,
                   const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (seconds > budget_seconds) {
    outcome.pass = false;
    outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!outcome.pass) ++g_failures;
  std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", id,
              name.c_str(), outcome.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(lo + (hi - lo) * k / (count - 1));
  return grid;
}

OmegaRealization omega_for(const ModelSpec& model, std::uint64_t seed,
                           std::span<const GroupElement> cells) {
  auto window = model.required_window(cells);
  return sample_omega(seed, window, model.coupling_spec(), model.deformation_spec(), model.dim());
}

std::vector<double> gap_lambdas(const Eigen::VectorXd& eigs, int how_many) {
  std::vector<double> candidates;
  candidates.push_back(eigs[0] - 0.5);
  for (int k = 0; k + 1 < eigs.size(); ++k)
    if (eigs[k + 1] - eigs[k] > 1e-6)
      candidates.push_back(0.5 * (eigs[k] + eigs[k + 1]));
  candidates.push_back(eigs[eigs.size() - 1] + 0.5);
  std::vector<double> picked;
  const int total = static_cast<int>(candidates.size());
  for (int k = 0; k < how_many; ++k)
    picked.push_back(candidates[(k * (total - 1)) / std::max(1, how_many - 1)]);
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// 1. Inertia-oracle equivalence: >= 200 random alloy instances (d=1, d=2,
//    n <= 200), 20 thresholds each, exact integer agreement.
Outcome criterion_inertia_oracle() {
  std::uint64_t key = 0xACCE5501;
  int instances = 0, checks = 0, mismatches = 0;
  while (instances < 210) {
    key = splitmix64(key);
    const bool planar = instances % 2 == 1;
    const ModelSpec model = planar ? testmodels::alloy_z2() : testmodels::alloy_z_line();
    const int radius = planar ? 3 + static_cast<int>(key % 4)
                              : 20 + static_cast<int>(key % 70);
    CoverRegion region = build_region(model.cell(), centered_box(model.dim(), radius));
    if (region.n() > 200) continue;
    OmegaRealization omega = omega_for(model, key, region.cells());
    const auto bc = (instances % 4 < 2) ? BoundaryCondition::Dirichlet
                                        : BoundaryCondition::Neumann;
    WeightedOperator op = assemble(region, omega, model, bc);
    DenseEigs eigs = dense_eigs(op);
    for (double lambda : gap_lambdas(eigs.values, 20)) {
      if (count_below(op, lambda).count != count_below_dense(eigs, lambda)) ++mismatches;
      ++checks;
    }
    ++instances;
  }
  Outcome out;
  out.pass = mismatches == 0 && checks >= 200 * 20 * 9 / 10;
  out.detail = std::to_string(checks) + " counts over " + std::to_string(instances) +
               " instances, " + std::to_string(mismatches) + " mismatches";
  return out;
}

// 2. Equivariance: conjugate_check exact on 20 random (gamma, seed, model)
//    triples, both boundary conditions.
Outcome criterion_equivariance() {
  std::uint64_t key = 0xE9u;
  int passed = 0, total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    key = splitmix64(key);
    const int pick = rep % 4;
    const ModelSpec model = pick == 0   ? testmodels::alloy_z_line()
                            : pick == 1 ? testmodels::metric_z_line()
                            : pick == 2 ? testmodels::alloy_metric_z_line()
                                        : testmodels::alloy_z2();
    const int d = model.dim();
    GroupElement gamma(d);
    for (int k = 0; k < d; ++k) {
      key = splitmix64(key);
      gamma[k] = static_cast<std::int64_t>(key % 7) - 3;
    }
    CoverRegion region = build_region(model.cell(), centered_box(d, d == 1 ? 4 : 2));
    OmegaRealization omega = omega_for(model, key, region.cells());
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      ++total;
      if (conjugate_check(region, omega, gamma, model, bc)) ++passed;
    }
  }
  return {passed == total,
          std::to_string(passed) + "/" + std::to_string(total) + " exact conjugations"};
}

// 3. Pastur-Subin convergence on the periodic oracle: free Z^1, Dirichlet
//    exhaustion radii {8,...,128}, 41-point grid on [-0.5, 4.5]; sup error
//    vs the theta >= 4096 oracle < 0.02 at the largest radius, errors
//    nonincreasing within 1e-3 slack.
Outcome criterion_pastur_subin() {
  const ModelSpec model = testmodels::free_z_line();
  const auto grid = linspace(-0.5, 4.5, 41);
  std::vector<std::vector<GroupElement>> sets;
  const std::vector<int> radii{8, 16, 32, 64, 128};
  for (int r : radii) sets.push_back(centered_box(1, r));
  FolnerSequence folner(std::move(sets), "centered boxes");
  ExhaustionResult res = exhaustion_estimate(model, 20240601, folner, grid,
                                             BoundaryCondition::Dirichlet, {2});
  IdsCurve oracle = bloch_oracle(model, grid, 4096);

  std::vector<double> errors;
  for (const auto& curve : res.curves) errors.push_back(curve.sup_distance(oracle));
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    if (errors[k + 1] > errors[k] + 1e-3) monotone = false;
  const double final_error = errors.back();
  Outcome out;
  out.pass = final_error < 0.02 && monotone;
  std::ostringstream os;
  os << "sup errors";
  for (double e : errors) os << " " << fmt(e);
  os << (monotone ? ", nonincreasing" : ", NOT nonincreasing");
  out.detail = os.str();
  return out;
}

// 4. Bracketing sandwich: alloy model, 500 single-cell samples; for every
//    grid lambda, lower - 3 SE <= N^{j=64} <= upper + 3 SE.
Outcome criterion_bracketing() {
  const ModelSpec model = testmodels::alloy_z_line();
  const auto grid = linspace(-0.5, 5.5, 25);
  BracketingResult bracket = bracketing_bounds(model, grid, 500, 7151, {2});
  std::vector<std::vector<GroupElement>> sets{centered_box(1, 64)};
  FolnerSequence folner(std::move(sets), "box");
  ExhaustionResult exh = exhaustion_estimate(model, 7151, folner, grid);
  const IdsCurve& mid = exh.final_curve();

  int violations = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lo = bracket.lower.values[k] - 3.0 * bracket.lower.standard_errors[k];
    const double hi = bracket.upper.values[k] + 3.0 * bracket.upper.standard_errors[k];
    if (mid.values[k] < lo - 1e-12 || mid.values[k] > hi + 1e-12) {
      ++violations;
      worst = std::max(worst, std::max(lo - mid.values[k], mid.values[k] - hi));
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = violations == 0
                   ? "sandwich holds at all 25 grid points (500 samples)"
                   : std::to_string(violations) + " violations, worst " + fmt(worst);
  return out;
}

// 5. Trace identity: periodic free Z^1, trace estimator at j=50 within 0.02
//    of the Bloch oracle at lambda in {1, 2, 3}.
Outcome criterion_trace_identity() {
  const ModelSpec model = testmodels::free_z_line();
  const std::vector<double> grid{1.0, 2.0, 3.0};
  IdsCurve traced = trace_estimate(model, grid, 50, 1, 0);
  IdsCurve oracle = bloch_oracle(model, grid, 4096);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    worst = std::max(worst, std::abs(traced.values[k] - oracle.values[k]));
  return {worst < 0.02, "max |trace - oracle| = " + fmt(worst)};
}

// 6. Wegner scaling: E = 2.0, eps in {0.02,0.05,0.1,0.2}, |J| in {16,32,64},
//    500 samples/row: alpha in [0.75,1.25], beta in [0.85,1.15], R^2 >= 0.95.
Outcome criterion_wegner() {
  const ModelSpec model = testmodels::alloy_z_line();
  const std::vector<double> epsilons{0.02, 0.05, 0.1, 0.2};
  const std::vector<int> sides{16, 32, 64};
  WegnerTable table = wegner_experiment(model, 2.0, epsilons, sides, 500, 90210, {2});
  const WegnerFit& fit = table.fit;
  const bool pass = fit.alpha >= 0.75 && fit.alpha <= 1.25 && fit.beta >= 0.85 &&
                    fit.beta <= 1.15 && fit.r_squared >= 0.95;
  return {pass, "alpha = " + fmt(fit.alpha) + ", beta = " + fmt(fit.beta) +
                    ", R^2 = " + fmt(fit.r_squared) + " (" +
                    std::to_string(fit.rows_used) + " rows)"};
}

// 7. Self-averaging: lambda = 2.0, 100 realizations; variance at j=32 below
//    half the variance at j=4.
Outcome criterion_self_averaging() {
  const ModelSpec model = testmodels::alloy_z_line();
  auto rows = self_averaging(model, 2.0, std::vector<int>{4, 32}, 100, 5077, {2});
  const double v4 = rows[0].variance, v32 = rows[1].variance;
  const bool pass = v32 < v4 && v32 < 0.5 * v4;
  return {pass, "var(j=4) = " + fmt(v4) + ", var(j=32) = " + fmt(v32)};
}

// 8. Dirichlet-Neumann count order: 50 random instances, exact integer
//    inequality at every grid threshold.
Outcome criterion_count_order() {
  std::uint64_t key = 0xD02Du;
  int violations = 0, checks = 0;
  for (int rep = 0; rep < 50; ++rep) {
    key = splitmix64(key);
    const ModelSpec model = rep % 2 ? testmodels::alloy_metric_z_line()
                                    : testmodels::alloy_z_line();
    CoverRegion region =
        build_region(model.cell(), centered_box(1, 8 + static_cast<int>(key % 20)));
    OmegaRealization omega = omega_for(model, key, region.cells());
    WeightedOperator op_d = assemble(region, omega, model, BoundaryCondition::Dirichlet);
    WeightedOperator op_n = assemble(region, omega, model, BoundaryCondition::Neumann);
    for (double lambda : linspace(-0.5, 6.5, 15)) {
      if (count_below(op_d, lambda).count > count_below(op_n, lambda).count) ++violations;
      ++checks;
    }
  }
  return {violations == 0, std::to_string(checks) + " integer comparisons, " +
                               std::to_string(violations) + " violations"};
}

// 9. Foelner machinery: defect closed forms for j <= 50; temperedness of
//    d in {1,2} box sequences with sup ratio < 2^d + 1.
Outcome criterion_folner() {
  for (int j = 1; j <= 50; ++j) {
    if (!(folner_defect(centered_box(1, j), GroupElement{1}) == Rational(2, 2 * j + 1)))
      return {false, "d=1 defect closed form fails at j=" + std::to_string(j)};
  }
  if (!(folner_defect(centered_box(2, 2), GroupElement{1, 0}) == Rational(10, 25)))
    return {false, "d=2 defect example fails"};
  for (int j = 1; j <= 50; ++j) {
    std::vector<std::vector<GroupElement>> pair{centered_box(1, j), centered_box(1, j + 1)};
    TemperedResult res = is_tempered(FolnerSequence(std::move(pair), "boxes"));
    if (!(res.sup_ratio == Rational(4 * j + 3, 2 * j + 3)))
      return {false, "d=1 sumset closed form fails at j=" + std::to_string(j)};
  }
  TemperedResult d1 = is_tempered(box_folner(1, 20));
  TemperedResult d2 = is_tempered(box_folner(2, 8));
  const bool pass = d1.tempered && d1.sup_ratio.value() < 3.0 && d2.tempered &&
                    d2.sup_ratio.value() < 5.0;
  return {pass, "sup ratios: d=1 " + fmt(d1.sup_ratio.value()) + " < 3, d=2 " +
                    fmt(d2.sup_ratio.value()) + " < 5"};
}

// 10. Reproducibility: bundled configs run twice and with 1 vs 8 workers
//     give byte-identical CSVs.
Outcome criterion_reproducibility() {
  const fs::path config_dir = TEST_CONFIG_DIR;
  const fs::path base = fs::temp_directory_path() / "idslab_acceptance_repro";
  fs::remove_all(base);

  auto read_file = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  int compared = 0;
  for (const char* name : {"oracle-vs-exhaustion.json", "alloy-bracket.json"}) {
    std::ifstream in(config_dir / name);
    json j;
    in >> j;
    ExperimentConfig cfg = ExperimentConfig::from_json(j);

    std::vector<fs::path> dirs;
    for (int variant = 0; variant < 3; ++variant) {
      fs::path dir = base / (std::string(name) + "_" + std::to_string(variant));
      RunOptions opts;
      opts.plots = false;
      opts.output_dir_override = dir.string();
      opts.workers_override = variant == 2 ? 8 : 1;
      run_experiments(cfg, opts);
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      const std::string reference = read_file(entry.path());
      for (int variant = 1; variant < 3; ++variant) {
        if (reference != read_file(dirs[variant] / entry.path().filename()))
          return {false, "CSV mismatch for " + entry.path().filename().string()};
        ++compared;
      }
    }
  }
  return {compared > 0, std::to_string(compared) + " CSV comparisons byte-identical"};
}

}  // namespace

int main() {
  std::printf("acceptance suite (ids-lab %s)\n", kVersion);
  run_criterion(1, "inertia-oracle equivalence", 60, criterion_inertia_oracle);
  run_criterion(2, "equivariance conjugation", 30, criterion_equivariance);
  run_criterion(3, "Pastur-Subin convergence vs Bloch oracle", 60, criterion_pastur_subin);
  run_criterion(4, "Dirichlet-Neumann bracketing sandwich", 60, criterion_bracketing);
  run_criterion(5, "fundamental-domain trace identity", 60, criterion_trace_identity);
  run_criterion(6, "Wegner scaling exponents", 300, criterion_wegner);
  run_criterion(7, "self-averaging variance decay", 60, criterion_self_averaging);
  run_criterion(8, "Dirichlet <= Neumann count order", 30, criterion_count_order);
  run_criterion(9, "Foelner defect and temperedness", 30, criterion_folner);
  run_criterion(10, "byte-identical reproducibility", 300, criterion_reproducibility);
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
