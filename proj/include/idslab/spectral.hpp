#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idslab/errors.hpp"
#include "idslab/ids_curve.hpp"
#include "idslab/skyline_ldlt.hpp"
#include "idslab/weighted_operator.hpp"

namespace idslab {

struct SlicingOptions {
  double pivot_rel_tol = 1e-10;  // pivot tolerance relative to ||K - lambda M||_inf
  int oracle_cap = 2000;         // dense solves refuse above this size
};

/// Result of counting eigenvalues strictly below a threshold.
struct SpectralCount {
  double lambda = 0.0;
  int count = 0;
  enum class Method { Dense, Inertia } method = Method::Inertia;
  double shift_applied = 0.0;  // 0 unless the threshold had to be perturbed
};

struct DenseEigs {
  Eigen::VectorXd values;        // ascending
  Eigen::MatrixXd vectors;       // M-orthonormal columns; empty unless requested
  double max_residual = 0.0;     // ||K phi - lambda M phi||_inf over pairs, if vectors
};

/// Dense generalized symmetric-definite eigensolve; the small-n oracle.
inline DenseEigs dense_eigs(const WeightedOperator& op, bool want_vectors = false,
                            const SlicingOptions& opts = {}) {
  if (op.size() > opts.oracle_cap)
    throw OracleCapExceeded("dense oracle refused: n = " + std::to_string(op.size()) +
                            " exceeds cap " + std::to_string(opts.oracle_cap));
  Eigen::MatrixXd k = op.stiffness_dense();
  Eigen::MatrixXd m = op.volume_diagonal().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      k, m, want_vectors ? Eigen::ComputeEigenvectors | Eigen::Ax_lBx
                         : Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw Error("dense eigensolver failed on n = " + std::to_string(op.size()));
  DenseEigs out;
  out.values = solver.eigenvalues();
  if (want_vectors) {
    out.vectors = solver.eigenvectors();
    for (int c = 0; c < out.vectors.cols(); ++c) {
      Eigen::VectorXd residual = k * out.vectors.col(c) -
                                 out.values[c] * (op.volume_diagonal().asDiagonal() *
                                                  out.vectors.col(c));
      out.max_residual = std::max(out.max_residual, residual.cwiseAbs().maxCoeff());
    }
  }
  return out;
}

inline int count_below_dense(const DenseEigs& eigs, double lambda) {
  return static_cast<int>(std::lower_bound(eigs.values.data(),
                                           eigs.values.data() + eigs.values.size(), lambda) -
                          eigs.values.data());
}

/// #\{ eigenvalues of K phi = lambda M phi strictly below `lambda` \}
/// via the inertia of a skyline LDL^T of K - lambda M. Exact integer,
/// no eigenvalues computed. A near-singular shift (pivot breakdown) is
/// retried at lambda -/+ 10 * pivot_tol, preferring the downward nudge so
/// the strict count at an exact eigenvalue excludes it; the perturbation
/// is reported in shift_applied.
inline SpectralCount count_below(const WeightedOperator& op, double lambda,
                                 const SlicingOptions& opts = {}) {
  // tolerance scale from the operator and the shift, not from K - lambda M,
  // which can vanish identically on tiny instances
  const double scale =
      op.stiffness_inf_norm() + std::abs(lambda) * op.volume_diagonal().maxCoeff();
  const double tol = opts.pivot_rel_tol * std::max(scale, 1e-300);
  std::string first_failure;
  for (double nudge : {0.0, -10.0 * tol, 10.0 * tol}) {
    SkylineMatrix a = SkylineMatrix::shifted(op, lambda + nudge);
    try {
      const int negatives = a.ldlt_negative_pivots(tol);
      return {lambda, negatives, SpectralCount::Method::Inertia, nudge};
    } catch (const PivotBreakdown& e) {
      if (first_failure.empty()) first_failure = e.what();
    }
  }
  throw PivotBreakdown("count_below: shift " + std::to_string(lambda) +
                       " persists on the spectrum after perturbation (" + first_failure + ")");
}

/// Normalized counting function N(lambda) = count_below(lambda) / vol on an
/// ascending grid.
inline IdsCurve counting_function(const WeightedOperator& op, double vol,
                                  std::span<const double> lambdas,
                                  const SlicingOptions& opts = {}) {
  if (!(vol > 0.0)) throw std::invalid_argument("counting_function: vol must be positive");
  for (std::size_t k = 0; k + 1 < lambdas.size(); ++k)
    if (!(lambdas[k] < lambdas[k + 1]))
      throw std::invalid_argument("counting_function: grid not strictly ascending");
  IdsCurve curve;
  curve.lambdas.assign(lambdas.begin(), lambdas.end());
  curve.values.reserve(lambdas.size());
  for (double lambda : lambdas)
    curve.values.push_back(count_below(op, lambda, opts).count / vol);
  curve.estimator = "counting_function";
  curve.seed = op.provenance().seed;
  curve.region = op.provenance().region;
  return curve;
}

}  // namespace idslab
