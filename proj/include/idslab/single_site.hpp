#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "idslab/group_element.hpp"

namespace idslab {

struct SiteContribution {
  GroupElement offset;
  int vertex;    // local vertex index within the cell at `offset`
  double value;  // nonnegative
};

/// Finitely supported single-site profile (potential v or deformation u).
/// The covering condition v >= kappa * chi_F demands a strictly positive
/// value at (0, i) for every local vertex i.
class SingleSiteFunction {
 public:
  SingleSiteFunction(int dim, int m, std::vector<SiteContribution> support)
      : dim_(dim), m_(m), support_(std::move(support)) {
    if (m_ < 1) throw std::invalid_argument("single-site: cell size must be >= 1");
    std::vector<double> at_origin(m_, 0.0);
    for (const auto& s : support_) {
      if (s.offset.dim() != dim_)
        throw std::invalid_argument("single-site: offset dimension mismatch");
      if (s.vertex < 0 || s.vertex >= m_)
        throw std::invalid_argument("single-site: vertex index out of range");
      if (!(s.value >= 0.0)) throw std::invalid_argument("single-site: values must be >= 0");
      if (s.offset.is_zero()) at_origin[s.vertex] += s.value;
    }
    covering_min_ = at_origin.empty() ? 0.0 : at_origin.front();
    for (double v : at_origin) covering_min_ = std::min(covering_min_, v);
    if (!(covering_min_ > 0.0))
      throw std::invalid_argument(
          "single-site: covering condition fails (needs value > 0 at offset 0 for every vertex)");
  }

  int dim() const { return dim_; }
  int cell_size() const { return m_; }
  std::span<const SiteContribution> support() const { return support_; }

  /// kappa: the guaranteed lower bound at the home cell.
  double covering_min() const { return covering_min_; }

  /// Largest possible column sum per vertex: max_i sum of values landing on i.
  double max_vertex_total() const {
    std::vector<double> totals(m_, 0.0);
    for (const auto& s : support_) totals[s.vertex] += s.value;
    double mx = totals.front();
    for (double t : totals) mx = std::max(mx, t);
    return mx;
  }

  /// Distinct offsets appearing in the support.
  std::vector<GroupElement> reach() const {
    std::vector<GroupElement> offs;
    for (const auto& s : support_) {
      bool seen = false;
      for (const auto& o : offs)
        if (o == s.offset) seen = true;
      if (!seen) offs.push_back(s.offset);
    }
    return offs;
  }

 private:
  int dim_;
  int m_;
  std::vector<SiteContribution> support_;
  double covering_min_;
};

/// Kronecker profile: value 1 at (0, i) for every local vertex.
inline SingleSiteFunction indicator_site(int dim, int m) {
  std::vector<SiteContribution> support;
  for (int i = 0; i < m; ++i) support.push_back({GroupElement::zero(dim), i, 1.0});
  return SingleSiteFunction(dim, m, std::move(support));
}

}  // namespace idslab
