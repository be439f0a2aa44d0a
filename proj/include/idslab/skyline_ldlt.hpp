#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "idslab/errors.hpp"
#include "idslab/weighted_operator.hpp"

namespace idslab {

/// Symmetric profile (skyline) matrix with an in-place LDL^T factorization.
/// Sylvester's law of inertia makes the negative-pivot count equal to the
/// number of eigenvalues below the shift, independent of ordering; natural
/// (lexicographic) vertex order keeps lattice regions banded, so the cost is
/// near-linear in n for fixed bandwidth.
class SkylineMatrix {
 public:
  /// A = K - lambda * M from a weighted operator.
  static SkylineMatrix shifted(const WeightedOperator& op, double lambda) {
    SkylineMatrix a;
    const int n = op.size();
    a.n_ = n;
    a.first_row_.assign(n, 0);
    for (int j = 0; j < n; ++j) a.first_row_[j] = j;

    const auto& lower = op.stiffness_lower();
    for (int k = 0; k < lower.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lower, k); it; ++it) {
        const int col = static_cast<int>(it.row());   // upper-triangle column
        const int row = static_cast<int>(it.col());   // upper-triangle row
        if (row < a.first_row_[col]) a.first_row_[col] = row;
      }

    a.col_ptr_.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) a.col_ptr_[j + 1] = a.col_ptr_[j] + (j - a.first_row_[j] + 1);
    a.values_.assign(a.col_ptr_[n], 0.0);

    for (int k = 0; k < lower.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lower, k); it; ++it) {
        const int col = static_cast<int>(it.row());
        const int row = static_cast<int>(it.col());
        a.at(row, col) += it.value();
      }
    for (int j = 0; j < n; ++j) a.at(j, j) -= lambda * op.volume_diagonal()[j];
    return a;
  }

  int size() const { return n_; }

  /// Number of negative pivots of the in-place LDL^T factorization.
  /// Throws PivotBreakdown when a pivot falls below pivot_tol in magnitude
  /// (the shift is numerically on the spectrum).
  int ldlt_negative_pivots(double pivot_tol) {
    int negatives = 0;
    std::vector<double> d(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      const int fj = first_row_[j];
      for (int i = fj + 1; i < j; ++i) {
        const int kstart = std::max(first_row_[i], fj);
        double s = at(i, j);
        for (int k = kstart; k < i; ++k) s -= at(k, i) * at(k, j);
        at(i, j) = s;
      }
      double dj = at(j, j);
      for (int i = fj; i < j; ++i) {
        const double g = at(i, j);
        const double u = g / d[i];
        dj -= g * u;
        at(i, j) = u;
      }
      if (!std::isfinite(dj) || std::abs(dj) <= pivot_tol)
        throw PivotBreakdown("pivot " + std::to_string(dj) + " at column " + std::to_string(j) +
                             " (tolerance " + std::to_string(pivot_tol) + ")");
      d[j] = dj;
      at(j, j) = dj;
      if (dj < 0.0) ++negatives;
    }
    return negatives;
  }

 private:
  double& at(int row, int col) { return values_[col_ptr_[col] + (row - first_row_[col])]; }
  double at(int row, int col) const { return values_[col_ptr_[col] + (row - first_row_[col])]; }

  int n_ = 0;
  std::vector<int> first_row_;
  std::vector<std::size_t> col_ptr_;
  std::vector<double> values_;
};

}  // namespace idslab
