#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dothash/encoding.hpp"
#include "dothash/sketches.hpp"

namespace dothash {

/// Strictly increasing list of element ids.
class SortedSet {
 public:
  SortedSet() = default;
  /// Sorts and drops duplicates.
  static SortedSet from_unsorted(std::vector<ElementId> elements);
  static SortedSet from_unsorted(std::initializer_list<std::uint64_t> ids);
  /// Throws std::invalid_argument unless `elements` is strictly increasing.
  static SortedSet from_sorted(std::vector<ElementId> elements);

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(ElementId x) const {
    return std::binary_search(elements_.begin(), elements_.end(), x);
  }
  std::span<const ElementId> elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

 private:
  explicit SortedSet(std::vector<ElementId> elements) : elements_(std::move(elements)) {}

  std::vector<ElementId> elements_;
};

/// Sorted two-pointer merge.
std::size_t exact_intersection(const SortedSet& a, const SortedSet& b);

/// Dot product of one-hot (standard basis) encodings of A and B, with the
/// injective element -> basis index map taken over A u B.
std::size_t sparse_basis_intersection(const SortedSet& a, const SortedSet& b);

double exact_jaccard(const SortedSet& a, const SortedSet& b);

/// Sum of w(x) over x in A n B.
double exact_weighted(const SortedSet& a, const SortedSet& b, const WeightFn& w);

}  // namespace dothash
