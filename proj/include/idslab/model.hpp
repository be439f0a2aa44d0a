#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "idslab/distributions.hpp"
#include "idslab/fundamental_cell.hpp"
#include "idslab/single_site.hpp"

namespace idslab {

/// Alloy-type random potential: V = V_per + sum_gamma q_gamma v(. - gamma).
struct PotentialModel {
  DistributionSpec coupling;
  SingleSiteFunction site_profile;
  bool require_nonnegative = true;
};

/// Alloy-type random metric: a(x) = sum_gamma exp(r_gamma) u(. - gamma).
struct MetricModel {
  DistributionSpec log_deformation;
  SingleSiteFunction site_profile;
};

/// Full model: cell geometry, periodic background potential, optional random
/// potential and optional random metric. Immutable value type.
class ModelSpec {
 public:
  ModelSpec(FundamentalCell cell, std::vector<double> periodic_potential,
            std::optional<PotentialModel> potential, std::optional<MetricModel> metric)
      : cell_(std::move(cell)),
        periodic_potential_(std::move(periodic_potential)),
        potential_(std::move(potential)),
        metric_(std::move(metric)) {
    if (periodic_potential_.empty()) periodic_potential_.assign(cell_.size(), 0.0);
    if (static_cast<int>(periodic_potential_.size()) != cell_.size())
      throw std::invalid_argument("model: periodic potential size != cell size");
    if (potential_ && (potential_->site_profile.dim() != cell_.dim() ||
                       potential_->site_profile.cell_size() != cell_.size()))
      throw std::invalid_argument("model: potential profile does not match cell");
    if (metric_ && (metric_->site_profile.dim() != cell_.dim() ||
                    metric_->site_profile.cell_size() != cell_.size()))
      throw std::invalid_argument("model: metric profile does not match cell");
    // negative coupling support is allowed here: the periodic background may
    // compensate, and evaluation raises NegativePotential where it does not
  }

  const FundamentalCell& cell() const { return cell_; }
  std::span<const double> periodic_potential() const { return periodic_potential_; }
  const std::optional<PotentialModel>& potential() const { return potential_; }
  const std::optional<MetricModel>& metric() const { return metric_; }
  int dim() const { return cell_.dim(); }

  /// True when neither field carries randomness (constant fields allowed).
  bool is_periodic() const {
    const bool potential_fixed = !potential_ || potential_->coupling.is_deterministic();
    const bool metric_fixed = !metric_ || metric_->log_deformation.is_deterministic();
    return potential_fixed && metric_fixed;
  }

  DistributionSpec coupling_spec() const {
    return potential_ ? potential_->coupling : DistributionSpec::constant(0.0);
  }
  DistributionSpec deformation_spec() const {
    return metric_ ? metric_->log_deformation : DistributionSpec::constant(0.0);
  }

  /// Window of omega sites needed to assemble on `cells`: the cells
  /// themselves plus all outside endpoints of crossing bonds, pulled back
  /// through the single-site support reaches.
  std::vector<GroupElement> required_window(std::span<const GroupElement> cells) const {
    std::unordered_set<GroupElement, GroupElementHash> verts(cells.begin(), cells.end());
    for (const auto& c : cells) {
      for (const auto& b : cell_.cross_bonds()) {
        verts.insert(c + b.offset);
        verts.insert(c - b.offset);
      }
    }
    std::unordered_set<GroupElement, GroupElementHash> window;
    auto pull_back = [&](const SingleSiteFunction& f) {
      for (const auto& v : verts)
        for (const auto& off : f.reach()) window.insert(v - off);
    };
    for (const auto& v : verts) window.insert(v);
    if (potential_) pull_back(potential_->site_profile);
    if (metric_) pull_back(metric_->site_profile);
    return {window.begin(), window.end()};
  }

 private:
  FundamentalCell cell_;
  std::vector<double> periodic_potential_;
  std::optional<PotentialModel> potential_;
  std::optional<MetricModel> metric_;
};

}  // namespace idslab
