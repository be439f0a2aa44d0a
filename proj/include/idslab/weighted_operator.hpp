#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "idslab/cover_region.hpp"
#include "idslab/model.hpp"
#include "idslab/omega.hpp"
#include "idslab/random_fields.hpp"

namespace idslab {

enum class BoundaryCondition { Dirichlet, Neumann };

inline const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

struct Provenance {
  std::uint64_t seed = 0;
  std::string region;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

/// Restricted operator H_omega^D as a generalized symmetric pencil
/// K phi = lambda M phi: K is the stiffness matrix (weighted Laplacian plus
/// potential times volume), M the positive diagonal of vertex volumes.
/// K is stored once per unordered pair (lower triangle).
class WeightedOperator {
 public:
  WeightedOperator(int n, std::vector<Eigen::Triplet<double>> lower_triplets,
                   Eigen::VectorXd volumes, BoundaryCondition bc, double gershgorin_upper,
                   Provenance provenance)
      : n_(n),
        stiffness_lower_(n, n),
        volumes_(std::move(volumes)),
        bc_(bc),
        gershgorin_upper_(gershgorin_upper),
        provenance_(std::move(provenance)) {
    stiffness_lower_.setFromTriplets(lower_triplets.begin(), lower_triplets.end());
    stiffness_lower_.makeCompressed();
  }

  int size() const { return n_; }
  BoundaryCondition bc() const { return bc_; }
  const Provenance& provenance() const { return provenance_; }

  /// Lower triangle (row >= col) of K, including the diagonal.
  const Eigen::SparseMatrix<double>& stiffness_lower() const { return stiffness_lower_; }

  /// Diagonal of M.
  const Eigen::VectorXd& volume_diagonal() const { return volumes_; }

  /// vol_omega(D) = trace of M.
  double volume() const { return volumes_.sum(); }

  /// Upper bound on all generalized eigenvalues:
  /// max_x (2 deg_w(x) / mu(x) + V(x)).
  double gershgorin_upper() const { return gershgorin_upper_; }

  Eigen::MatrixXd stiffness_dense() const {
    Eigen::MatrixXd dense = Eigen::MatrixXd(stiffness_lower_);
    dense = dense.selfadjointView<Eigen::Lower>();
    return dense;
  }

  double stiffness_max_abs() const {
    double mx = 0.0;
    for (int k = 0; k < stiffness_lower_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_lower_, k); it; ++it)
        mx = std::max(mx, std::abs(it.value()));
    return mx;
  }

  /// || K ||_inf (max absolute row sum).
  double stiffness_inf_norm() const {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < stiffness_lower_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_lower_, k); it; ++it) {
        sums[it.row()] += std::abs(it.value());
        if (it.row() != it.col()) sums[it.col()] += std::abs(it.value());
      }
    return sums.maxCoeff();
  }

  /// || K 1 ||_inf; zero for Neumann free operators up to accumulation order.
  double row_sum_max_abs() const {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n_);
    Eigen::VectorXd prod = stiffness_lower_.selfadjointView<Eigen::Lower>() * ones;
    return prod.cwiseAbs().maxCoeff();
  }

  /// Coordinate text dump for external verification: header "n nnz", then
  /// one "row col value" triple per stored (lower-triangle) entry, 1-based.
  void write_coordinate_format(std::ostream& os) const {
    os << n_ << " " << stiffness_lower_.nonZeros() << "\n";
    for (int k = 0; k < stiffness_lower_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_lower_, k); it; ++it)
        os << (it.row() + 1) << " " << (it.col() + 1) << " " << it.value() << "\n";
  }

 private:
  int n_;
  Eigen::SparseMatrix<double> stiffness_lower_;
  Eigen::VectorXd volumes_;
  BoundaryCondition bc_;
  double gershgorin_upper_;
  Provenance provenance_;
};

/// Assemble H_omega^D on a region.
///
/// Discretization contract: vertex volume mu(x) = base_vertex_weight * a(x);
/// edge weight w(x,y) = base_edge_weight * sqrt(a(x) a(y)). The quadratic
/// form sums w (f(x)-f(y))^2 over interior edges plus V mu f^2; Dirichlet
/// adds 2 w(x, y_out) f(x)^2 per crossing bond (the reflected boundary term
/// that makes cell decoupling an upper bound for eigenvalue counts, so
/// Dirichlet-Neumann bracketing of the IDS holds); Neumann drops crossing
/// bonds entirely.
inline WeightedOperator assemble(const CoverRegion& region, const OmegaRealization& omega,
                                 const ModelSpec& model, BoundaryCondition bc) {
  const int n = region.n();

  std::vector<double> conformal(n);
  std::vector<double> potential(n);
  for (int flat = 0; flat < n; ++flat) {
    auto [gamma, local] = region.vertex(flat);
    conformal[flat] = conformal_at(model, omega, gamma, local);
    potential[flat] = potential_at(model, omega, gamma, local);
  }

  Eigen::VectorXd volumes(n);
  for (int flat = 0; flat < n; ++flat) {
    auto [gamma, local] = region.vertex(flat);
    volumes[flat] = region.cell().vertex_weights()[local] * conformal[flat];
  }

  std::vector<double> diag(n, 0.0);
  std::vector<double> weighted_degree(n, 0.0);
  std::map<std::pair<int, int>, double> offdiag;  // key (row, col), row > col

  for (const auto& e : region.edges()) {
    const double w = e.base_weight * std::sqrt(conformal[e.u] * conformal[e.v]);
    diag[e.u] += w;
    diag[e.v] += w;
    weighted_degree[e.u] += w;
    weighted_degree[e.v] += w;
    const auto key = std::minmax(e.u, e.v);
    offdiag[{key.second, key.first}] -= w;
  }

  for (const auto& b : region.crossing_bonds()) {
    const double a_out = conformal_at(model, omega, b.outside_cell, b.outside_local);
    const double w = b.base_weight * std::sqrt(conformal[b.inside] * a_out);
    weighted_degree[b.inside] += w;
    if (bc == BoundaryCondition::Dirichlet) diag[b.inside] += 2.0 * w;
  }

  double bound = 0.0;
  for (int x = 0; x < n; ++x) {
    diag[x] += potential[x] * volumes[x];
    bound = std::max(bound, 2.0 * weighted_degree[x] / volumes[x] + potential[x]);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n + offdiag.size());
  for (int x = 0; x < n; ++x) triplets.emplace_back(x, x, diag[x]);
  for (const auto& [key, w] : offdiag) triplets.emplace_back(key.first, key.second, w);

  Provenance prov{omega.seed(), region.descriptor(), bc};
  return WeightedOperator(n, std::move(triplets), std::move(volumes), bc, bound, std::move(prov));
}

/// vol_omega(D), without assembling the full operator.
inline double volume(const CoverRegion& region, const OmegaRealization& omega,
                     const ModelSpec& model) {
  double total = 0.0;
  for (int flat = 0; flat < region.n(); ++flat) {
    auto [gamma, local] = region.vertex(flat);
    total += region.cell().vertex_weights()[local] * conformal_at(model, omega, gamma, local);
  }
  return total;
}

/// Equivariance check: assemble(act(gamma, region), shift(omega, gamma))
/// must equal the permutation conjugate of assemble(region, omega),
/// entrywise exactly (both K and M). Both sides sum identical terms in
/// identical order, so equality is exact, not approximate.
inline bool conjugate_check(const CoverRegion& region, const OmegaRealization& omega,
                            const GroupElement& gamma, const ModelSpec& model,
                            BoundaryCondition bc) {
  const WeightedOperator base = assemble(region, omega, model, bc);
  TranslatedRegion moved = act(gamma, region);
  const OmegaRealization omega_shifted = shift(omega, gamma);
  const WeightedOperator translated = assemble(moved.region, omega_shifted, model, bc);

  const auto& perm = moved.permutation;
  for (int x = 0; x < base.size(); ++x)
    if (base.volume_diagonal()[x] != translated.volume_diagonal()[perm[x]]) return false;

  std::map<std::pair<int, int>, double> lhs, rhs;
  const auto& a = base.stiffness_lower();
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      const auto key = std::minmax(perm[it.row()], perm[it.col()]);
      lhs[{key.second, key.first}] = it.value();
    }
  const auto& b = translated.stiffness_lower();
  for (int k = 0; k < b.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(b, k); it; ++it)
      rhs[{static_cast<int>(it.row()), static_cast<int>(it.col())}] = it.value();

  return lhs == rhs;
}

}  // namespace idslab
