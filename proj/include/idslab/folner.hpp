#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "idslab/errors.hpp"
#include "idslab/group_element.hpp"
#include "idslab/rational.hpp"

namespace idslab {

/// Nested finite subsets I_j of Z^d. Sets are kept sorted (lexicographic)
/// and deduplicated; monotonicity is certified by is_tempered, not assumed.
class FolnerSequence {
 public:
  FolnerSequence(std::vector<std::vector<GroupElement>> sets, std::string shape)
      : sets_(std::move(sets)), shape_(std::move(shape)) {
    if (sets_.empty()) throw std::invalid_argument("FolnerSequence: no sets");
    const int d = sets_.front().empty() ? 0 : sets_.front().front().dim();
    for (auto& s : sets_) {
      if (s.empty()) throw std::invalid_argument("FolnerSequence: empty set");
      for (const auto& g : s)
        if (g.dim() != d) throw std::invalid_argument("FolnerSequence: mixed dimensions");
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
  }

  std::size_t count() const { return sets_.size(); }
  std::span<const GroupElement> set(std::size_t j) const { return sets_[j]; }
  const std::string& shape() const { return shape_; }
  int dim() const { return sets_.front().front().dim(); }

 private:
  std::vector<std::vector<GroupElement>> sets_;
  std::string shape_;
};

/// Centered box {-r..r}^d for radius r; r = 0 is the single cell {0}.
inline std::vector<GroupElement> centered_box(int dim, int radius) {
  if (dim < 1) throw std::invalid_argument("centered_box: dimension must be >= 1");
  if (radius < 0) throw std::invalid_argument("centered_box: radius must be >= 0");
  std::vector<GroupElement> cells;
  GroupElement g(dim);
  std::vector<std::int64_t> digits(dim, -radius);
  for (;;) {
    for (int k = 0; k < dim; ++k) g[k] = digits[k];
    cells.push_back(g);
    int k = dim - 1;
    while (k >= 0 && digits[k] == radius) digits[k--] = -radius;
    if (k < 0) break;
    ++digits[k];
  }
  return cells;
}

/// Segment {0..L-1}^d; used for Wegner boxes where |J| must be a free choice.
inline std::vector<GroupElement> corner_box(int dim, int side) {
  if (dim < 1 || side < 1) throw std::invalid_argument("corner_box: bad arguments");
  std::vector<GroupElement> cells;
  GroupElement g(dim);
  std::vector<std::int64_t> digits(dim, 0);
  for (;;) {
    for (int k = 0; k < dim; ++k) g[k] = digits[k];
    cells.push_back(g);
    int k = dim - 1;
    while (k >= 0 && digits[k] == side - 1) digits[k--] = 0;
    if (k < 0) break;
    ++digits[k];
  }
  return cells;
}

/// The box sequence I_j = {-j..j}^d, j = 1..j_max.
inline FolnerSequence box_folner(int dim, int j_max) {
  if (dim < 1) throw std::invalid_argument("box_folner: dimension must be >= 1");
  if (j_max < 1) throw std::invalid_argument("box_folner: j_max must be >= 1");
  std::vector<std::vector<GroupElement>> sets;
  sets.reserve(j_max);
  for (int j = 1; j <= j_max; ++j) sets.push_back(centered_box(dim, j));
  return FolnerSequence(std::move(sets), "centered boxes");
}

/// |I delta (I + gamma)| / |I| by exact enumeration.
inline Rational folner_defect(std::span<const GroupElement> set, const GroupElement& gamma) {
  if (set.empty()) throw std::invalid_argument("folner_defect: empty set");
  std::unordered_set<GroupElement, GroupElementHash> original(set.begin(), set.end());
  std::int64_t sym_diff = 0;
  for (const auto& g : set) {
    if (!original.count(g + gamma)) ++sym_diff;  // in I+gamma, not in I
    if (!original.count(g - gamma)) ++sym_diff;  // in I, not in I+gamma  (g itself shifted out)
  }
  return Rational(sym_diff, static_cast<std::int64_t>(set.size()));
}

struct TemperedResult {
  bool tempered = false;
  Rational sup_ratio{0, 1};
  std::size_t argmax = 0;  // index j attaining the supremum (pair I_{j+1}, I_j)
};

/// Exact sumset check of the growth condition
/// sup_j |I_{j+1} + (-I_j)| / |I_{j+1}| against `bound` (default 2^d + 1,
/// which certifies box sequences). Throws NonMonotoneSequence when the
/// sequence is not nested.
inline TemperedResult is_tempered(const FolnerSequence& seq,
                                  std::optional<double> bound = std::nullopt) {
  const int d = seq.dim();
  const double limit = bound.value_or(static_cast<double>((std::int64_t{1} << d) + 1));

  for (std::size_t j = 0; j + 1 < seq.count(); ++j) {
    auto small = seq.set(j);
    auto large = seq.set(j + 1);
    if (!std::includes(large.begin(), large.end(), small.begin(), small.end()))
      throw NonMonotoneSequence("Foelner sequence not monotone at index " + std::to_string(j));
  }

  TemperedResult result;
  if (seq.count() == 1) {
    // single set: the condition quantifies over consecutive pairs; treat
    // the lone set against itself (constant sequences are tempered).
    result.sup_ratio = Rational(1, 1);
  }
  for (std::size_t j = 0; j + 1 < seq.count(); ++j) {
    auto small = seq.set(j);
    auto large = seq.set(j + 1);
    std::unordered_set<GroupElement, GroupElementHash> sumset;
    sumset.reserve(large.size() * 2);
    for (const auto& a : large)
      for (const auto& b : small) sumset.insert(a - b);
    Rational ratio(static_cast<std::int64_t>(sumset.size()),
                   static_cast<std::int64_t>(large.size()));
    if (j == 0 || result.sup_ratio < ratio) {
      result.sup_ratio = ratio;
      result.argmax = j;
    }
  }
  result.tempered = result.sup_ratio.value() < limit;
  return result;
}

}  // namespace idslab
