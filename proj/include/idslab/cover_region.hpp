#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "idslab/fundamental_cell.hpp"
#include "idslab/group_element.hpp"

namespace idslab {

/// Finite restriction region phi(I): |I| copies of the fundamental cell with
/// all edges materialized. Flat vertex indexing is canonical and
/// deterministic: cells sorted lexicographically, then local index, so
/// vertex (gamma, i) has index rank(gamma) * m + i.
class CoverRegion {
 public:
  /// Edge of the region graph with both endpoints inside (flat indices).
  struct Edge {
    int u;
    int v;
    double base_weight;
  };

  /// Cover edge with exactly one endpoint inside the region.
  struct CrossingBond {
    int inside;              // flat index of the interior endpoint
    double base_weight;      // periodic reference weight of the bond
    GroupElement outside_cell;
    int outside_local;
  };

  CoverRegion(FundamentalCell cell, std::vector<GroupElement> cells)
      : cell_(std::move(cell)), cells_(std::move(cells)) {
    if (cells_.empty()) throw std::invalid_argument("CoverRegion: empty cell set");
    for (const auto& c : cells_)
      if (c.dim() != cell_.dim())
        throw std::invalid_argument("CoverRegion: cell coordinate dimension mismatch");
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    build();
  }

  const FundamentalCell& cell() const { return cell_; }
  std::span<const GroupElement> cells() const { return cells_; }
  int n() const { return static_cast<int>(cells_.size()) * cell_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const CrossingBond> crossing_bonds() const { return crossing_bonds_; }

  std::optional<int> cell_rank(const GroupElement& gamma) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), gamma);
    if (it == cells_.end() || !(*it == gamma)) return std::nullopt;
    return static_cast<int>(it - cells_.begin());
  }

  int flat_index(const GroupElement& gamma, int local) const {
    auto rank = cell_rank(gamma);
    if (!rank || local < 0 || local >= cell_.size())
      throw std::invalid_argument("CoverRegion: vertex not in region");
    return *rank * cell_.size() + local;
  }

  /// Inverse of flat_index.
  std::pair<GroupElement, int> vertex(int flat) const {
    if (flat < 0 || flat >= n()) throw std::invalid_argument("CoverRegion: flat index out of range");
    return {cells_[flat / cell_.size()], flat % cell_.size()};
  }

  std::string descriptor() const {
    return "cells=" + std::to_string(cells_.size()) + " d=" + std::to_string(cell_.dim()) +
           " m=" + std::to_string(cell_.size());
  }

 private:
  // Canonical edge order: per cell (sorted), internal edges in stored order,
  // then cross bonds in stored order. Crossing bonds likewise, with the
  // forward direction checked before the reverse. All downstream summation
  // follows this order, which makes translated assemblies bit-identical.
  void build() {
    const int m = cell_.size();
    for (std::size_t r = 0; r < cells_.size(); ++r) {
      const GroupElement& gamma = cells_[r];
      const int base = static_cast<int>(r) * m;
      for (const auto& e : cell_.internal_edges())
        edges_.push_back({base + e.i, base + e.j, e.weight});
      for (const auto& b : cell_.cross_bonds()) {
        if (auto rank = cell_rank(gamma + b.offset)) {
          edges_.push_back({base + b.i, *rank * m + b.j, b.weight});
        } else {
          crossing_bonds_.push_back({base + b.i, b.weight, gamma + b.offset, b.j});
        }
        if (!cell_rank(gamma - b.offset)) {
          crossing_bonds_.push_back({base + b.j, b.weight, gamma - b.offset, b.i});
        }
      }
    }
  }

  FundamentalCell cell_;
  std::vector<GroupElement> cells_;
  std::vector<Edge> edges_;
  std::vector<CrossingBond> crossing_bonds_;
};

inline CoverRegion build_region(const FundamentalCell& cell, std::vector<GroupElement> cells) {
  return CoverRegion(cell, std::move(cells));
}

inline CoverRegion build_region(const FundamentalCell& cell, std::span<const GroupElement> cells) {
  return CoverRegion(cell, std::vector<GroupElement>(cells.begin(), cells.end()));
}

/// Result of the deck transformation on a region: the translated region and
/// the flat-index bijection old -> new realizing the unitary as a
/// permutation (identity under canonical ordering, computed honestly).
struct TranslatedRegion {
  CoverRegion region;
  std::vector<int> permutation;
};

inline TranslatedRegion act(const GroupElement& gamma, const CoverRegion& region) {
  std::vector<GroupElement> cells;
  cells.reserve(region.cells().size());
  for (const auto& c : region.cells()) cells.push_back(c + gamma);
  CoverRegion translated(region.cell(), std::move(cells));
  std::vector<int> perm(region.n());
  for (int flat = 0; flat < region.n(); ++flat) {
    auto [c, local] = region.vertex(flat);
    perm[flat] = translated.flat_index(c + gamma, local);
  }
  return {std::move(translated), std::move(perm)};
}

}  // namespace idslab
