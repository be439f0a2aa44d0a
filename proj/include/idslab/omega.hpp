#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idslab/distributions.hpp"
#include "idslab/errors.hpp"
#include "idslab/group_element.hpp"
#include "idslab/rng.hpp"

namespace idslab {

/// One sample omega of the probability space: the i.i.d. field
/// gamma -> (q_gamma, r_gamma) over Z^d, materialized on a finite window.
///
/// Values are a pure function of (seed, gamma + base_shift): re-querying
/// returns bit-identical numbers and distinct sites use distinct counter
/// streams. The window can be extended on demand without changing values
/// already seen; extension is not thread-safe, reads are. Shifts share the
/// underlying table, so a shifted copy covers the translated window.
class OmegaRealization {
 public:
  OmegaRealization(std::uint64_t seed, int dim, DistributionSpec coupling_spec,
                   DistributionSpec deformation_spec)
      : seed_(seed),
        shift_(dim),
        coupling_spec_(coupling_spec),
        deformation_spec_(deformation_spec),
        table_(std::make_shared<Table>()) {}

  std::uint64_t seed() const { return seed_; }
  int dim() const { return shift_.dim(); }
  const GroupElement& base_shift() const { return shift_; }
  const DistributionSpec& coupling_spec() const { return coupling_spec_; }
  const DistributionSpec& deformation_spec() const { return deformation_spec_; }

  /// Coupling constant q_gamma.
  double coupling(const GroupElement& gamma) const { return lookup(gamma).first; }

  /// Metric log-deformation r_gamma.
  double log_deformation(const GroupElement& gamma) const { return lookup(gamma).second; }

  bool covers(const GroupElement& gamma) const { return table_->count(gamma + shift_) > 0; }

  /// Materialize the field on `window` (user coordinates). Not thread-safe.
  void extend_window(std::span<const GroupElement> window) {
    for (const auto& g : window) {
      const GroupElement site = g + shift_;
      if (table_->count(site)) continue;
      const double q = coupling_spec_.sample(site_key(seed_, site, 0));
      const double r = deformation_spec_.sample(site_key(seed_, site, 1));
      table_->emplace(site, std::pair<double, double>{q, r});
    }
  }

  /// The realization gamma . omega: q'_g = q_{g - gamma}. Shares the table,
  /// so coverage moves with the shift and round trips are exact.
  OmegaRealization shifted(const GroupElement& gamma) const {
    OmegaRealization out = *this;
    out.shift_ = shift_ - gamma;
    return out;
  }

 private:
  using Table = std::unordered_map<GroupElement, std::pair<double, double>, GroupElementHash>;

  const std::pair<double, double>& lookup(const GroupElement& gamma) const {
    auto it = table_->find(gamma + shift_);
    if (it == table_->end())
      throw WindowTooSmall("realization window does not cover site " + gamma.to_string() +
                           " (shifted " + (gamma + shift_).to_string() + ")");
    return it->second;
  }

  std::uint64_t seed_;
  GroupElement shift_;
  DistributionSpec coupling_spec_;
  DistributionSpec deformation_spec_;
  std::shared_ptr<Table> table_;
};

/// Seeded sampling of the field on a finite window.
inline OmegaRealization sample_omega(std::uint64_t seed, std::span<const GroupElement> window,
                                     DistributionSpec coupling_spec,
                                     DistributionSpec deformation_spec, int dim) {
  OmegaRealization omega(seed, dim, coupling_spec, deformation_spec);
  omega.extend_window(window);
  return omega;
}

inline OmegaRealization shift(const OmegaRealization& omega, const GroupElement& gamma) {
  return omega.shifted(gamma);
}

}  // namespace idslab
