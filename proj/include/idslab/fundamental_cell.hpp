#pragma once

#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "idslab/group_element.hpp"

namespace idslab {

/// Edge between two vertices of the same cell copy.
struct InternalEdge {
  int i;
  int j;
  double weight;
};

/// Bond from local vertex i of cell gamma to local vertex j of cell
/// gamma + offset. Stored once in canonical orientation (offset
/// lexicographically positive); the reversed bond is implied.
struct CrossBond {
  int i;
  GroupElement offset;
  int j;
  double weight;
};

/// One period of the covering structure: a finite weighted graph cell plus
/// the bonds tying it to neighbouring copies. Immutable after construction.
class FundamentalCell {
 public:
  FundamentalCell(int dim, int m, std::vector<InternalEdge> internal_edges,
                  std::vector<CrossBond> cross_bonds, std::vector<double> vertex_weights)
      : dim_(dim),
        m_(m),
        internal_edges_(std::move(internal_edges)),
        cross_bonds_(std::move(cross_bonds)),
        vertex_weights_(std::move(vertex_weights)) {
    validate();
  }

  int dim() const { return dim_; }
  int size() const { return m_; }
  std::span<const InternalEdge> internal_edges() const { return internal_edges_; }
  std::span<const CrossBond> cross_bonds() const { return cross_bonds_; }
  std::span<const double> vertex_weights() const { return vertex_weights_; }

 private:
  static bool lex_negative(const GroupElement& g) {
    for (int k = 0; k < g.dim(); ++k) {
      if (g[k] != 0) return g[k] < 0;
    }
    return false;
  }

  void validate() {
    if (dim_ < 1) throw std::invalid_argument("cell: dimension must be >= 1");
    if (m_ < 1) throw std::invalid_argument("cell: vertex count must be >= 1");
    if (static_cast<int>(vertex_weights_.size()) != m_)
      throw std::invalid_argument("cell: vertex weight count != vertex count");
    for (double w : vertex_weights_)
      if (!(w > 0.0)) throw std::invalid_argument("cell: vertex weights must be positive");

    for (auto& e : internal_edges_) {
      if (e.i < 0 || e.i >= m_ || e.j < 0 || e.j >= m_)
        throw std::invalid_argument("cell: internal edge vertex out of range");
      if (e.i == e.j) throw std::invalid_argument("cell: self loop not allowed");
      if (!(e.weight > 0.0)) throw std::invalid_argument("cell: edge weights must be positive");
      if (e.i > e.j) std::swap(e.i, e.j);
    }
    {
      std::set<std::pair<int, int>> seen;
      for (const auto& e : internal_edges_)
        if (!seen.insert({e.i, e.j}).second)
          throw std::invalid_argument("cell: duplicate internal edge");
    }

    std::set<std::tuple<int, std::vector<std::int64_t>, int>> seen_bonds;
    for (auto& b : cross_bonds_) {
      if (b.i < 0 || b.i >= m_ || b.j < 0 || b.j >= m_)
        throw std::invalid_argument("cell: cross bond vertex out of range");
      if (b.offset.dim() != dim_)
        throw std::invalid_argument("cell: cross bond offset dimension mismatch");
      if (b.offset.is_zero())
        throw std::invalid_argument("cell: cross bond offset must be nonzero");
      if (!(b.weight > 0.0)) throw std::invalid_argument("cell: bond weights must be positive");
      if (lex_negative(b.offset)) {
        // canonicalize: store as (j, -offset, i)
        std::swap(b.i, b.j);
        b.offset = -b.offset;
      }
      std::vector<std::int64_t> off(b.offset.dim());
      for (int k = 0; k < b.offset.dim(); ++k) off[k] = b.offset[k];
      if (!seen_bonds.insert({b.i, off, b.j}).second)
        throw std::invalid_argument("cell: duplicate cross bond (reversed bonds are implied)");
    }

    check_patch_connectivity();
  }

  // The tiled cover must be connected; checked on the 3^d patch {-1,0,1}^d.
  void check_patch_connectivity() const {
    std::vector<GroupElement> patch;
    GroupElement g(dim_);
    std::vector<int> digits(dim_, -1);
    for (;;) {
      for (int k = 0; k < dim_; ++k) g[k] = digits[k];
      patch.push_back(g);
      int k = dim_ - 1;
      while (k >= 0 && digits[k] == 1) digits[k--] = -1;
      if (k < 0) break;
      ++digits[k];
    }
    auto rank_of = [&](const GroupElement& c) -> int {
      int r = 0;
      for (int k = 0; k < dim_; ++k) r = r * 3 + static_cast<int>(c[k] + 1);
      return r;
    };
    const int cells = static_cast<int>(patch.size());
    const int n = cells * m_;
    std::vector<int> parent(n);
    for (int v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (int c = 0; c < cells; ++c) {
      for (const auto& e : internal_edges_) unite(c * m_ + e.i, c * m_ + e.j);
      for (const auto& b : cross_bonds_) {
        GroupElement target = patch[c] + b.offset;
        bool inside = true;
        for (int k = 0; k < dim_; ++k)
          if (target[k] < -1 || target[k] > 1) inside = false;
        if (!inside) continue;
        unite(c * m_ + b.i, rank_of(target) * m_ + b.j);
      }
    }
    const int root = find(0);
    for (int v = 1; v < n; ++v)
      if (find(v) != root)
        throw std::invalid_argument("cell: tiled cover is disconnected on the 3^d patch");
  }

  int dim_;
  int m_;
  std::vector<InternalEdge> internal_edges_;
  std::vector<CrossBond> cross_bonds_;
  std::vector<double> vertex_weights_;
};

}  // namespace idslab
