#include "dothash/exact.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace dothash {

SortedSet SortedSet::from_unsorted(std::vector<ElementId> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return SortedSet(std::move(elements));
}

SortedSet SortedSet::from_unsorted(std::initializer_list<std::uint64_t> ids) {
  std::vector<ElementId> elements;
  elements.reserve(ids.size());
  for (auto id : ids) elements.emplace_back(id);
  return from_unsorted(std::move(elements));
}

SortedSet SortedSet::from_sorted(std::vector<ElementId> elements) {
  for (std::size_t i = 1; i < elements.size(); ++i) {
    if (!(elements[i - 1] < elements[i])) {
      throw std::invalid_argument("set elements must be strictly increasing");
    }
  }
  return SortedSet(std::move(elements));
}

namespace {

template <typename OnCommon>
void for_each_common(const SortedSet& a, const SortedSet& b, OnCommon&& on_common) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      on_common(*ia);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

std::size_t exact_intersection(const SortedSet& a, const SortedSet& b) {
  std::size_t count = 0;
  for_each_common(a, b, [&](ElementId) { ++count; });
  return count;
}

std::size_t sparse_basis_intersection(const SortedSet& a, const SortedSet& b) {
  std::vector<ElementId> universe;
  universe.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(universe));
  const auto index_of = [&](ElementId e) {
    return static_cast<Eigen::Index>(
        std::lower_bound(universe.begin(), universe.end(), e) - universe.begin());
  };
  const auto n = static_cast<Eigen::Index>(universe.size());
  Eigen::SparseVector<double> va(n);
  Eigen::SparseVector<double> vb(n);
  va.reserve(static_cast<Eigen::Index>(a.size()));
  vb.reserve(static_cast<Eigen::Index>(b.size()));
  for (ElementId e : a) va.insert(index_of(e)) = 1.0;
  for (ElementId e : b) vb.insert(index_of(e)) = 1.0;
  return static_cast<std::size_t>(va.dot(vb));
}

double exact_jaccard(const SortedSet& a, const SortedSet& b) {
  if (a.empty() && b.empty()) throw DataError("Jaccard undefined for two empty sets");
  const auto inter = static_cast<double>(exact_intersection(a, b));
  return inter / (static_cast<double>(a.size() + b.size()) - inter);
}

double exact_weighted(const SortedSet& a, const SortedSet& b, const WeightFn& w) {
  double total = 0.0;
  for_each_common(a, b, [&](ElementId e) { total += w.at(e); });
  return total;
}

}  // namespace dothash
