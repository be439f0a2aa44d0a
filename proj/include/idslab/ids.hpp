#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "idslab/folner.hpp"
#include "idslab/ids_curve.hpp"
#include "idslab/linear_fit.hpp"
#include "idslab/model.hpp"
#include "idslab/parallel.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectral.hpp"
#include "idslab/weighted_operator.hpp"

namespace idslab {

namespace detail {

inline constexpr std::uint64_t kTagBracket = 0x62726163u;
inline constexpr std::uint64_t kTagTrace = 0x74726163u;
inline constexpr std::uint64_t kTagWegner = 0x7765676eu;
inline constexpr std::uint64_t kTagSelfAvg = 0x73656c66u;

inline OmegaRealization realization_for(const ModelSpec& model, std::uint64_t seed,
                                        std::span<const GroupElement> cells) {
  auto window = model.required_window(cells);
  return sample_omega(seed, window, model.coupling_spec(), model.deformation_spec(), model.dim());
}

inline bool all_equal(std::span<const double> v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] != v.front()) return false;
  return true;
}

/// Delta-method standard error of the ratio estimator mean(x)/mean(y).
inline double ratio_standard_error(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (all_equal(x) && all_equal(y)) return 0.0;  // degenerate sample, exactly
  double mx = 0.0, my = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    mx += x[s];
    my += y[s];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    sxx += (x[s] - mx) * (x[s] - mx);
    syy += (y[s] - my) * (y[s] - my);
    sxy += (x[s] - mx) * (y[s] - my);
  }
  const double dn = static_cast<double>(n - 1);
  sxx /= dn;
  syy /= dn;
  sxy /= dn;
  const double r = mx / my;
  const double var = (sxx - 2.0 * r * sxy + r * r * syy) / (my * my * static_cast<double>(n));
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Foelner exhaustion
// ---------------------------------------------------------------------------

struct ExhaustionResult {
  std::vector<IdsCurve> curves;     // one per Foelner set, in order
  std::vector<double> sup_deltas;   // sup |N_{j+1} - N_j| between consecutive curves
  const IdsCurve& final_curve() const { return curves.back(); }
};

/// Normalized eigenvalue counting along an admissible exhaustion, one fixed
/// realization (self-averaging makes a single omega sufficient in the limit).
inline ExhaustionResult exhaustion_estimate(const ModelSpec& model, std::uint64_t seed,
                                            const FolnerSequence& folner,
                                            std::span<const double> lambdas,
                                            BoundaryCondition bc = BoundaryCondition::Dirichlet,
                                            const ExecPolicy& exec = {},
                                            const SlicingOptions& opts = {}) {
  const TemperedResult cert = is_tempered(folner);
  if (!cert.tempered)
    throw std::invalid_argument("exhaustion_estimate: Foelner sequence is not tempered (ratio " +
                                std::to_string(cert.sup_ratio.value()) + ")");

  const auto largest = folner.set(folner.count() - 1);
  OmegaRealization omega = detail::realization_for(model, seed, largest);

  ExhaustionResult result;
  result.curves.resize(folner.count());
  parallel_for_index(static_cast<int>(folner.count()), exec.workers, [&](int j) {
    CoverRegion region = build_region(model.cell(), folner.set(j));
    WeightedOperator op = assemble(region, omega, model, bc);
    IdsCurve curve = counting_function(op, op.volume(), lambdas, opts);
    curve.estimator = "exhaustion";
    curve.seed = seed;
    result.curves[j] = std::move(curve);
  });
  for (std::size_t j = 0; j + 1 < result.curves.size(); ++j)
    result.sup_deltas.push_back(result.curves[j + 1].sup_distance(result.curves[j]));
  return result;
}

// ---------------------------------------------------------------------------
// Bloch-Floquet oracle (periodic models)
// ---------------------------------------------------------------------------

/// Exact IDS of a periodic model by quasimomentum decomposition: each theta
/// on a midpoint grid over [0, 2pi)^d contributes the m x m Hermitian fiber
/// obtained by twisting every cross bond of offset gamma with exp(i theta.gamma).
inline IdsCurve bloch_oracle(const ModelSpec& model, std::span<const double> lambdas,
                             int theta_samples_per_dim) {
  if (!model.is_periodic())
    throw NotPeriodic("bloch_oracle: model has random components");
  if (theta_samples_per_dim < 1)
    throw std::invalid_argument("bloch_oracle: theta_samples must be >= 1");
  const int d = model.dim();
  const int m = model.cell().size();
  double fiber_count_check = std::pow(static_cast<double>(theta_samples_per_dim), d);
  if (fiber_count_check > static_cast<double>(1 << 24))
    throw std::invalid_argument("bloch_oracle: theta grid too large");

  const GroupElement origin = GroupElement::zero(d);
  std::vector<GroupElement> home{origin};
  OmegaRealization omega = detail::realization_for(model, 0, home);

  std::vector<double> a(m), v(m), mu(m);
  double cell_volume = 0.0;
  for (int i = 0; i < m; ++i) {
    a[i] = conformal_at(model, omega, origin, i);
    v[i] = potential_at(model, omega, origin, i);
    mu[i] = model.cell().vertex_weights()[i] * a[i];
    cell_volume += mu[i];
  }

  const long fibers = static_cast<long>(std::llround(fiber_count_check));
  std::vector<double> all_eigs;
  all_eigs.reserve(static_cast<std::size_t>(fibers) * m);

  std::vector<int> index(d, 0);
  Eigen::MatrixXcd fiber(m, m);
  Eigen::VectorXd inv_sqrt_mu(m);
  for (int i = 0; i < m; ++i) inv_sqrt_mu[i] = 1.0 / std::sqrt(mu[i]);
  const double two_pi = 2.0 * std::numbers::pi;

  for (long f = 0; f < fibers; ++f) {
    std::vector<double> theta(d);
    for (int k = 0; k < d; ++k)
      theta[k] = two_pi * (index[k] + 0.5) / theta_samples_per_dim;

    fiber.setZero();
    for (const auto& e : model.cell().internal_edges()) {
      const double w = e.weight * std::sqrt(a[e.i] * a[e.j]);
      fiber(e.i, e.i) += w;
      fiber(e.j, e.j) += w;
      fiber(e.i, e.j) -= w;
      fiber(e.j, e.i) -= w;
    }
    for (const auto& b : model.cell().cross_bonds()) {
      const double w = b.weight * std::sqrt(a[b.i] * a[b.j]);
      double phase_arg = 0.0;
      for (int k = 0; k < d; ++k) phase_arg += theta[k] * static_cast<double>(b.offset[k]);
      const std::complex<double> phase(std::cos(phase_arg), std::sin(phase_arg));
      fiber(b.i, b.i) += w;
      fiber(b.j, b.j) += w;
      fiber(b.i, b.j) -= w * phase;
      fiber(b.j, b.i) -= w * std::conj(phase);
    }
    for (int i = 0; i < m; ++i) fiber(i, i) += v[i] * mu[i];

    // fold the volume measure in: B = D^{-1/2} K D^{-1/2}
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) fiber(i, j) *= inv_sqrt_mu[i] * inv_sqrt_mu[j];

    if (m == 1) {
      all_eigs.push_back(fiber(0, 0).real());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(fiber, Eigen::EigenvaluesOnly);
      for (int i = 0; i < m; ++i) all_eigs.push_back(solver.eigenvalues()[i]);
    }

    for (int k = d - 1; k >= 0; --k) {
      if (++index[k] < theta_samples_per_dim) break;
      index[k] = 0;
    }
  }
  std::sort(all_eigs.begin(), all_eigs.end());

  IdsCurve curve;
  curve.lambdas.assign(lambdas.begin(), lambdas.end());
  curve.values.reserve(lambdas.size());
  const double denom = static_cast<double>(fibers) * cell_volume;
  for (double lambda : lambdas) {
    const auto below = std::lower_bound(all_eigs.begin(), all_eigs.end(), lambda);
    curve.values.push_back(static_cast<double>(below - all_eigs.begin()) / denom);
  }
  curve.estimator = "bloch_oracle";
  curve.region = "fibers=" + std::to_string(fibers);
  return curve;
}

// ---------------------------------------------------------------------------
// Dirichlet-Neumann bracketing (single-cell Monte Carlo)
// ---------------------------------------------------------------------------

struct BracketingResult {
  IdsCurve lower;  // mean Dirichlet count / mean volume
  IdsCurve upper;  // mean Neumann count / mean volume
  int samples = 0;
};

inline BracketingResult bracketing_bounds(const ModelSpec& model, std::span<const double> lambdas,
                                          int samples, std::uint64_t seed,
                                          const ExecPolicy& exec = {},
                                          const SlicingOptions& opts = {}) {
  if (samples < 2) throw std::invalid_argument("bracketing_bounds: samples must be >= 2");
  const GroupElement origin = GroupElement::zero(model.dim());
  const CoverRegion cell_region = build_region(model.cell(), std::vector<GroupElement>{origin});
  const std::size_t grid = lambdas.size();

  std::vector<std::vector<double>> dirichlet(samples, std::vector<double>(grid, 0.0));
  std::vector<std::vector<double>> neumann(samples, std::vector<double>(grid, 0.0));
  std::vector<double> volumes(samples, 0.0);

  parallel_for_index(samples, exec.workers, [&](int s) {
    const std::uint64_t child = derive_seed(seed, detail::kTagBracket, s);
    OmegaRealization omega = detail::realization_for(model, child, cell_region.cells());
    WeightedOperator op_d = assemble(cell_region, omega, model, BoundaryCondition::Dirichlet);
    WeightedOperator op_n = assemble(cell_region, omega, model, BoundaryCondition::Neumann);
    volumes[s] = op_d.volume();
    for (std::size_t k = 0; k < grid; ++k) {
      dirichlet[s][k] = count_below(op_d, lambdas[k], opts).count;
      neumann[s][k] = count_below(op_n, lambdas[k], opts).count;
    }
  });

  double mean_volume = 0.0;
  for (int s = 0; s < samples; ++s) mean_volume += volumes[s];
  mean_volume /= samples;

  auto reduce = [&](const std::vector<std::vector<double>>& counts, const char* tag) {
    IdsCurve curve;
    curve.lambdas.assign(lambdas.begin(), lambdas.end());
    curve.values.resize(grid);
    curve.standard_errors.resize(grid);
    std::vector<double> x(samples);
    for (std::size_t k = 0; k < grid; ++k) {
      for (int s = 0; s < samples; ++s) x[s] = counts[s][k];
      double mean = 0.0;
      for (double val : x) mean += val;
      mean /= samples;
      curve.values[k] = mean / mean_volume;
      curve.standard_errors[k] = detail::ratio_standard_error(x, volumes);
    }
    curve.estimator = tag;
    curve.seed = seed;
    curve.region = cell_region.descriptor();
    return curve;
  };

  BracketingResult result;
  result.lower = reduce(dirichlet, "bracket_lower");
  result.upper = reduce(neumann, "bracket_upper");
  result.samples = samples;
  return result;
}

// ---------------------------------------------------------------------------
// Fundamental-domain trace estimator
// ---------------------------------------------------------------------------

/// Monte Carlo estimate of E[tr(chi_F P(lambda))] / E[vol(F)] on the box of
/// radius `box_radius`: per realization, eigenpairs of the Dirichlet
/// restriction (dense oracle path) and the projector mass on the central
/// cell's vertices.
inline IdsCurve trace_estimate(const ModelSpec& model, std::span<const double> lambdas,
                               int box_radius, int samples, std::uint64_t seed,
                               const ExecPolicy& exec = {}, const SlicingOptions& opts = {}) {
  if (samples < 1) throw std::invalid_argument("trace_estimate: samples must be >= 1");
  if (box_radius < 0) throw std::invalid_argument("trace_estimate: radius must be >= 0");
  const int d = model.dim();
  const int m = model.cell().size();
  const CoverRegion region = build_region(model.cell(), centered_box(d, box_radius));
  const GroupElement origin = GroupElement::zero(d);
  const std::size_t grid = lambdas.size();

  std::vector<std::vector<double>> traces(samples, std::vector<double>(grid, 0.0));
  std::vector<double> cell_volumes(samples, 0.0);

  parallel_for_index(samples, exec.workers, [&](int s) {
    const std::uint64_t child = derive_seed(seed, detail::kTagTrace, s);
    OmegaRealization omega = detail::realization_for(model, child, region.cells());
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Dirichlet);
    DenseEigs eigs = dense_eigs(op, /*want_vectors=*/true, opts);

    const int base = region.flat_index(origin, 0);
    double vol_f = 0.0;
    for (int i = 0; i < m; ++i) vol_f += op.volume_diagonal()[base + i];
    cell_volumes[s] = vol_f;

    // central-cell projector mass of each eigenvector, cumulated by energy
    const int n = op.size();
    std::vector<double> cumulative(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      double mass = 0.0;
      for (int i = 0; i < m; ++i) {
        const double phi = eigs.vectors(base + i, k);
        mass += phi * phi * op.volume_diagonal()[base + i];
      }
      cumulative[k + 1] = cumulative[k] + mass;
    }
    for (std::size_t k = 0; k < grid; ++k) {
      const auto below = std::lower_bound(eigs.values.data(), eigs.values.data() + n, lambdas[k]);
      traces[s][k] = cumulative[below - eigs.values.data()];
    }
  });

  IdsCurve curve;
  curve.lambdas.assign(lambdas.begin(), lambdas.end());
  curve.values.resize(grid);
  curve.standard_errors.resize(grid);
  double mean_vol = 0.0;
  for (double v : cell_volumes) mean_vol += v;
  mean_vol /= samples;
  std::vector<double> x(samples);
  for (std::size_t k = 0; k < grid; ++k) {
    for (int s = 0; s < samples; ++s) x[s] = traces[s][k];
    double mean = 0.0;
    for (double val : x) mean += val;
    mean /= samples;
    curve.values[k] = mean / mean_vol;
    curve.standard_errors[k] = detail::ratio_standard_error(x, cell_volumes);
  }
  curve.estimator = "trace";
  curve.seed = seed;
  curve.region = region.descriptor();
  return curve;
}

// ---------------------------------------------------------------------------
// Wegner experiment
// ---------------------------------------------------------------------------

/// Monte Carlo of E[tr P^J([E - eps, E + eps])] over boxes J = {0..L-1}^d
/// with Dirichlet restrictions, plus the two-variable log-log fit of
/// mean ~ C eps^alpha |J|^beta over rows with positive mean.
inline WegnerTable wegner_experiment(const ModelSpec& model, double energy,
                                     std::span<const double> epsilons,
                                     std::span<const int> box_sides, int samples,
                                     std::uint64_t seed, const ExecPolicy& exec = {},
                                     const SlicingOptions& opts = {}) {
  if (epsilons.empty() || box_sides.empty() || samples < 1)
    throw std::invalid_argument("wegner_experiment: epsilons, box sides and samples required");
  for (double eps : epsilons)
    if (!(eps > 0.0)) throw std::invalid_argument("wegner_experiment: epsilon must be positive");

  WegnerTable table;
  table.energy = energy;

  for (int side : box_sides) {
    const CoverRegion region = build_region(model.cell(), corner_box(model.dim(), side));
    const std::uint64_t row_seed = derive_seed(seed, detail::kTagWegner, side);
    std::vector<std::vector<double>> window_traces(samples,
                                                   std::vector<double>(epsilons.size(), 0.0));
    parallel_for_index(samples, exec.workers, [&](int s) {
      OmegaRealization omega =
          detail::realization_for(model, derive_seed(row_seed, 0, s), region.cells());
      WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Dirichlet);
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const int above = count_below(op, energy + epsilons[e], opts).count;
        const int below = count_below(op, energy - epsilons[e], opts).count;
        window_traces[s][e] = above - below;
      }
    });
    const long j_size = static_cast<long>(region.cells().size());
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      std::vector<double> traces(samples);
      for (int s = 0; s < samples; ++s) traces[s] = window_traces[s][e];
      double mean = 0.0;
      for (double t : traces) mean += t;
      mean /= samples;
      double se = 0.0;
      if (samples > 1 && !detail::all_equal(traces)) {
        double var = 0.0;
        for (double t : traces) var += (t - mean) * (t - mean);
        se = std::sqrt(var / (samples - 1) / samples);
      }
      table.rows.push_back({epsilons[e], j_size, mean, se, samples});
    }
  }

  std::vector<const WegnerRow*> usable;
  for (const auto& row : table.rows)
    if (row.mean_trace > 0.0) usable.push_back(&row);
  if (usable.size() < 3)
    throw InsufficientData("wegner fit needs >= 3 rows with positive mean trace, got " +
                           std::to_string(usable.size()));

  Eigen::MatrixXd design(usable.size(), 3);
  Eigen::VectorXd y(usable.size());
  for (std::size_t r = 0; r < usable.size(); ++r) {
    design(r, 0) = 1.0;
    design(r, 1) = std::log(usable[r]->epsilon);
    design(r, 2) = std::log(static_cast<double>(usable[r]->j_size));
    y[r] = std::log(usable[r]->mean_trace);
  }
  const LeastSquares ls = fit_least_squares(design, y);
  WegnerFit fit;
  fit.log_c = ls.coefficients[0];
  fit.alpha = ls.coefficients[1];
  fit.beta = ls.coefficients[2];
  fit.alpha_se = ls.standard_errors[1];
  fit.beta_se = ls.standard_errors[2];
  fit.alpha_ci_lo = fit.alpha - 1.96 * fit.alpha_se;
  fit.alpha_ci_hi = fit.alpha + 1.96 * fit.alpha_se;
  fit.beta_ci_lo = fit.beta - 1.96 * fit.beta_se;
  fit.beta_ci_hi = fit.beta + 1.96 * fit.beta_se;
  fit.r_squared = ls.r_squared;
  fit.rows_used = static_cast<int>(usable.size());
  table.fit = fit;
  return table;
}

// ---------------------------------------------------------------------------
// Self-averaging statistics
// ---------------------------------------------------------------------------

struct SelfAveragingRow {
  int radius;
  double mean;
  double variance;  // unbiased sample variance across realizations
  int samples;
};

/// Ensemble mean and variance of N_omega^j(lambda) across independent
/// realizations, per box radius: the empirical face of spectral
/// non-randomness.
inline std::vector<SelfAveragingRow> self_averaging(const ModelSpec& model, double lambda,
                                                    std::span<const int> radii, int samples,
                                                    std::uint64_t seed,
                                                    const ExecPolicy& exec = {},
                                                    const SlicingOptions& opts = {}) {
  if (samples < 10) throw std::invalid_argument("self_averaging: samples must be >= 10");
  std::vector<SelfAveragingRow> rows;
  for (int radius : radii) {
    const CoverRegion region = build_region(model.cell(), centered_box(model.dim(), radius));
    const std::uint64_t row_seed = derive_seed(seed, detail::kTagSelfAvg, radius);
    std::vector<double> values(samples, 0.0);
    parallel_for_index(samples, exec.workers, [&](int s) {
      OmegaRealization omega =
          detail::realization_for(model, derive_seed(row_seed, 0, s), region.cells());
      WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Dirichlet);
      values[s] = count_below(op, lambda, opts).count / op.volume();
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= samples;
    double var = 0.0;
    if (!detail::all_equal(values)) {  // constant sample has variance 0 exactly
      for (double v : values) var += (v - mean) * (v - mean);
      var /= (samples - 1);
    }
    rows.push_back({radius, mean, var, samples});
  }
  return rows;
}

}  // namespace idslab
