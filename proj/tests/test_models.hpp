#pragma once

// Shared model builders for the test suites.

#include "idslab/model.hpp"
#include "idslab/single_site.hpp"

namespace testmodels {

using namespace idslab;

/// Free Laplacian on the Z line: one vertex per cell, one bond of offset +1,
/// unit weights, no randomness.
inline ModelSpec free_z_line() {
  FundamentalCell cell(1, 1, {}, {{0, GroupElement{1}, 0, 1.0}}, {1.0});
  return ModelSpec(std::move(cell), {}, std::nullopt, std::nullopt);
}

/// Anderson-type alloy on the Z line: uniform(0,1) couplings, v = chi at
/// offset 0.
inline ModelSpec alloy_z_line() {
  FundamentalCell cell(1, 1, {}, {{0, GroupElement{1}, 0, 1.0}}, {1.0});
  PotentialModel pot{DistributionSpec::uniform(0.0, 1.0), indicator_site(1, 1), true};
  return ModelSpec(std::move(cell), {}, pot, std::nullopt);
}

/// Alloy on the Z^2 square lattice.
inline ModelSpec alloy_z2() {
  FundamentalCell cell(2, 1, {},
                       {{0, GroupElement{1, 0}, 0, 1.0}, {0, GroupElement{0, 1}, 0, 1.0}}, {1.0});
  PotentialModel pot{DistributionSpec::uniform(0.0, 1.0), indicator_site(2, 1), true};
  return ModelSpec(std::move(cell), {}, pot, std::nullopt);
}

/// Random conformal metric on the Z line: r ~ triangular(-1/2, 1/2),
/// u = chi at offset 0 (so a = exp(r) cell-wise), no potential.
inline ModelSpec metric_z_line() {
  FundamentalCell cell(1, 1, {}, {{0, GroupElement{1}, 0, 1.0}}, {1.0});
  MetricModel metric{DistributionSpec::triangular(-0.5, 0.5), indicator_site(1, 1)};
  return ModelSpec(std::move(cell), {}, std::nullopt, metric);
}

/// Alloy potential plus random metric on the Z line.
inline ModelSpec alloy_metric_z_line() {
  FundamentalCell cell(1, 1, {}, {{0, GroupElement{1}, 0, 1.0}}, {1.0});
  PotentialModel pot{DistributionSpec::uniform(0.0, 1.0), indicator_site(1, 1), true};
  MetricModel metric{DistributionSpec::triangular(-0.5, 0.5), indicator_site(1, 1)};
  return ModelSpec(std::move(cell), {}, pot, metric);
}

/// Two-vertex ladder cell: one internal rung, two rails of offset +1.
inline FundamentalCell ladder_cell() {
  return FundamentalCell(1, 2, {{0, 1, 1.0}},
                         {{0, GroupElement{1}, 0, 1.0}, {1, GroupElement{1}, 1, 1.0}},
                         {1.0, 1.0});
}

/// Ladder with alloy potential on both rails.
inline ModelSpec alloy_ladder() {
  PotentialModel pot{DistributionSpec::uniform(0.0, 1.0), indicator_site(1, 2), true};
  return ModelSpec(ladder_cell(), {}, pot, std::nullopt);
}

}  // namespace testmodels
