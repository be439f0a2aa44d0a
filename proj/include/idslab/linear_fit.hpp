#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace idslab {

/// Ordinary least squares y ~ X b for a small dense design matrix, with
/// coefficient standard errors and R^2. Degrees of freedom may be zero
/// (exact fit), in which case the standard errors are reported as zero.
struct LeastSquares {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  double r_squared = 0.0;
};

inline LeastSquares fit_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const int rows = static_cast<int>(design.rows());
  const int cols = static_cast<int>(design.cols());
  if (rows < cols) throw std::invalid_argument("least squares: underdetermined system");
  LeastSquares out;
  Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::LDLT<Eigen::MatrixXd> solver(xtx);
  out.coefficients = solver.solve(design.transpose() * y);

  Eigen::VectorXd residual = y - design * out.coefficients;
  const double ss_res = residual.squaredNorm();
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  out.standard_errors = Eigen::VectorXd::Zero(cols);
  if (rows > cols) {
    const double sigma2 = ss_res / (rows - cols);
    Eigen::MatrixXd cov = sigma2 * xtx.inverse();
    for (int k = 0; k < cols; ++k)
      out.standard_errors[k] = std::sqrt(std::max(0.0, cov(k, k)));
  }
  return out;
}

}  // namespace idslab
