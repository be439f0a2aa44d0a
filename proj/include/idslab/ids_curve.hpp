#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace idslab {

/// Monotone grid function lambda -> N(lambda) with provenance metadata.
/// standard_errors is empty for deterministic estimators.
struct IdsCurve {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> standard_errors;
  std::string estimator;
  std::uint64_t seed = 0;
  std::string region;

  void validate() const {
    if (values.size() != lambdas.size())
      throw std::logic_error("IdsCurve: value/grid size mismatch");
    if (!standard_errors.empty() && standard_errors.size() != lambdas.size())
      throw std::logic_error("IdsCurve: standard error size mismatch");
    for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
      if (!(lambdas[k] < lambdas[k + 1]))
        throw std::logic_error("IdsCurve: grid not strictly ascending");
      if (values[k] > values[k + 1]) throw std::logic_error("IdsCurve: values not monotone");
    }
    for (double v : values)
      if (v < 0.0) throw std::logic_error("IdsCurve: negative value");
  }

  /// sup-distance to another curve on the shared grid.
  double sup_distance(const IdsCurve& other) const {
    if (other.values.size() != values.size())
      throw std::invalid_argument("IdsCurve: grids differ");
    double mx = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
      mx = std::max(mx, std::abs(values[k] - other.values[k]));
    return mx;
  }
};

/// One Monte Carlo row of a spectral-window trace experiment.
struct WegnerRow {
  double epsilon;
  long j_size;
  double mean_trace;
  double standard_error;
  int samples;
};

/// Least-squares fit of log(mean) = log_c + alpha log(eps) + beta log(|J|).
struct WegnerFit {
  double log_c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_se = 0.0;
  double beta_se = 0.0;
  double alpha_ci_lo = 0.0, alpha_ci_hi = 0.0;
  double beta_ci_lo = 0.0, beta_ci_hi = 0.0;
  double r_squared = 0.0;
  int rows_used = 0;

  /// Hoelder continuity of the IDS with exponent alpha follows only when the
  /// volume scaling is linear; report it when the beta interval contains 1.
  bool holder_consistent() const { return beta_ci_lo <= 1.0 && 1.0 <= beta_ci_hi; }
};

struct WegnerTable {
  double energy = 0.0;
  std::vector<WegnerRow> rows;
  WegnerFit fit;

  void validate(int cell_size) const {
    for (const auto& r : rows) {
      if (!(r.epsilon > 0.0)) throw std::logic_error("WegnerTable: epsilon must be positive");
      if (r.j_size <= 0) throw std::logic_error("WegnerTable: |J| must be positive");
      if (r.mean_trace < 0.0) throw std::logic_error("WegnerTable: negative mean trace");
      if (r.mean_trace > static_cast<double>(r.j_size) * cell_size + 1e-9)
        throw std::logic_error("WegnerTable: mean trace exceeds n");
    }
  }
};

}  // namespace idslab
