#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "idslab/cover_region.hpp"
#include "idslab/errors.hpp"
#include "idslab/model.hpp"
#include "idslab/omega.hpp"

namespace idslab {

/// V^omega(gamma0, i) = sum over the support of v of q_{gamma0 - offset} * value,
/// restricted to contributions landing on local vertex i. Summation order is
/// the stored support order, so translated evaluations are bit-identical.
inline double alloy_potential_at(const OmegaRealization& omega, const SingleSiteFunction& v,
                                 const GroupElement& gamma0, int local) {
  double sum = 0.0;
  for (const auto& s : v.support()) {
    if (s.vertex != local) continue;
    sum += omega.coupling(gamma0 - s.offset) * s.value;
  }
  return sum;
}

/// a_omega(gamma0, i) = sum over the support of u of exp(r_{gamma0 - offset}) * value.
inline double conformal_factor_at(const OmegaRealization& omega, const SingleSiteFunction& u,
                                  const GroupElement& gamma0, int local) {
  double sum = 0.0;
  for (const auto& s : u.support()) {
    if (s.vertex != local) continue;
    sum += std::exp(omega.log_deformation(gamma0 - s.offset)) * s.value;
  }
  return sum;
}

/// Potential vector over region vertices, V = V_per + alloy part.
inline std::vector<double> alloy_potential(const OmegaRealization& omega,
                                           const CoverRegion& region,
                                           const SingleSiteFunction& v,
                                           std::span<const double> v_per,
                                           bool require_nonnegative = true) {
  std::vector<double> values(region.n(), 0.0);
  for (int flat = 0; flat < region.n(); ++flat) {
    auto [gamma, local] = region.vertex(flat);
    double val = (v_per.empty() ? 0.0 : v_per[local]) + alloy_potential_at(omega, v, gamma, local);
    if (require_nonnegative && val < 0.0)
      throw NegativePotential("potential negative at " + gamma.to_string() + " local " +
                              std::to_string(local));
    values[flat] = val;
  }
  return values;
}

/// Conformal factor vector over region vertices; strictly positive.
inline std::vector<double> conformal_factor(const OmegaRealization& omega,
                                            const CoverRegion& region,
                                            const SingleSiteFunction& u) {
  std::vector<double> values(region.n(), 0.0);
  for (int flat = 0; flat < region.n(); ++flat) {
    auto [gamma, local] = region.vertex(flat);
    values[flat] = conformal_factor_at(omega, u, gamma, local);
  }
  return values;
}

/// Model-level evaluation: potential at one cover vertex.
inline double potential_at(const ModelSpec& model, const OmegaRealization& omega,
                           const GroupElement& gamma, int local) {
  double val = model.periodic_potential()[local];
  if (model.potential()) {
    val += alloy_potential_at(omega, model.potential()->site_profile, gamma, local);
    if (model.potential()->require_nonnegative && val < 0.0)
      throw NegativePotential("potential negative at " + gamma.to_string() + " local " +
                              std::to_string(local));
  }
  return val;
}

/// Model-level evaluation: conformal factor at one cover vertex (1 when the
/// model has no metric block).
inline double conformal_at(const ModelSpec& model, const OmegaRealization& omega,
                           const GroupElement& gamma, int local) {
  if (!model.metric()) return 1.0;
  return conformal_factor_at(omega, model.metric()->site_profile, gamma, local);
}

/// Two-sided analytic bracket for the conformal factor, the discrete
/// counterpart of the uniform metric bounds: every value of a_omega lies in
/// [kappa * exp(min r), (max column sum) * exp(max r)].
struct ConformalBounds {
  double lower;
  double upper;
};

inline ConformalBounds conformal_bounds(const SingleSiteFunction& u,
                                        const DistributionSpec& log_deformation) {
  return {u.covering_min() * std::exp(log_deformation.support_min()),
          u.max_vertex_total() * std::exp(log_deformation.support_max())};
}

/// Diagnostic stand-in for the continuum gradient bound: the largest
/// |log a(x) - log a(y)| over edges of the region. Reported, not enforced.
inline double max_adjacent_log_ratio(const CoverRegion& region, std::span<const double> a) {
  double mx = 0.0;
  for (const auto& e : region.edges())
    mx = std::max(mx, std::abs(std::log(a[e.u]) - std::log(a[e.v])));
  return mx;
}

}  // namespace idslab
