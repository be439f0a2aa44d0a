#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace idslab {

/// Element of the deck group Z^d. Fixed small capacity, value semantics.
/// Comparison is lexicographic; this order is the canonical cell order
/// used everywhere (flat indexing, permutations, summation order).
class GroupElement {
 public:
  static constexpr int kMaxDim = 8;

  GroupElement() : dim_(0) { coords_.fill(0); }

  explicit GroupElement(int dim) : dim_(dim) {
    check_dim(dim);
    coords_.fill(0);
  }

  GroupElement(std::initializer_list<std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    coords_.fill(0);
    int k = 0;
    for (std::int64_t c : coords) coords_[k++] = c;
  }

  explicit GroupElement(std::span<const std::int64_t> coords)
      : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    coords_.fill(0);
    for (int k = 0; k < dim_; ++k) coords_[k] = coords[k];
  }

  static GroupElement zero(int dim) { return GroupElement(dim); }

  int dim() const { return dim_; }

  std::int64_t operator[](int k) const { return coords_[k]; }
  std::int64_t& operator[](int k) { return coords_[k]; }

  bool is_zero() const {
    for (int k = 0; k < dim_; ++k)
      if (coords_[k] != 0) return false;
    return true;
  }

  GroupElement operator+(const GroupElement& o) const {
    require_same_dim(o);
    GroupElement r(dim_);
    for (int k = 0; k < dim_; ++k) r.coords_[k] = coords_[k] + o.coords_[k];
    return r;
  }

  GroupElement operator-(const GroupElement& o) const {
    require_same_dim(o);
    GroupElement r(dim_);
    for (int k = 0; k < dim_; ++k) r.coords_[k] = coords_[k] - o.coords_[k];
    return r;
  }

  GroupElement operator-() const {
    GroupElement r(dim_);
    for (int k = 0; k < dim_; ++k) r.coords_[k] = -coords_[k];
    return r;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    if (a.dim_ != b.dim_) return false;
    for (int k = 0; k < a.dim_; ++k)
      if (a.coords_[k] != b.coords_[k]) return false;
    return true;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    a.require_same_dim(b);
    for (int k = 0; k < a.dim_; ++k) {
      if (a.coords_[k] != b.coords_[k]) return a.coords_[k] < b.coords_[k];
    }
    return false;
  }

  std::string to_string() const {
    std::string s = "(";
    for (int k = 0; k < dim_; ++k) {
      if (k) s += ",";
      s += std::to_string(coords_[k]);
    }
    s += ")";
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
    return os << g.to_string();
  }

 private:
  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxDim)
      throw std::invalid_argument("GroupElement: dimension out of range");
  }
  void require_same_dim(const GroupElement& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("GroupElement: dimension mismatch");
  }

  std::array<std::int64_t, kMaxDim> coords_;
  int dim_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
      std::uint64_t x = static_cast<std::uint64_t>(g[k]);
      x += 0x9E3779B97F4A7C15ull;
      x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
      x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
      h ^= (x ^ (x >> 31)) + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace idslab
