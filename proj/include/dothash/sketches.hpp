#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ranges>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "dothash/encoding.hpp"
#include "dothash/error.hpp"

namespace dothash {

enum class WeightKind { unit, adamic_adar, resource_allocation, idf, custom };

std::string to_string(WeightKind kind);

/// Nonnegative per-element weight f(x) for the sum-over-intersection family.
class WeightFn {
 public:
  using Lookup = std::function<std::optional<double>(ElementId)>;

  static WeightFn unit();
  /// Throws DataError if any weight is negative.
  static WeightFn table(WeightKind kind, std::unordered_map<ElementId, double> weights);
  /// Lazily evaluated; negativity is checked where the weight is consumed.
  static WeightFn function(WeightKind kind, Lookup lookup);

  WeightKind kind() const { return kind_; }
  bool is_unit() const { return kind_ == WeightKind::unit; }

  std::optional<double> find(ElementId e) const {
    if (!lookup_) return 1.0;
    return lookup_(e);
  }

  /// Throws DataError("weight not defined for element") when missing.
  double at(ElementId e) const;

 private:
  WeightFn(WeightKind kind, Lookup lookup) : kind_(kind), lookup_(std::move(lookup)) {}

  WeightKind kind_;
  Lookup lookup_;
};

template <typename Scalar = double>
class BasicDotHashSketch {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicDotHashSketch(std::uint64_t seed, Vector values, std::uint64_t cardinality,
                     bool weighted = false)
      : seed_(seed), values_(std::move(values)), cardinality_(cardinality), weighted_(weighted) {}

  std::uint64_t seed() const { return seed_; }
  std::size_t dims() const { return static_cast<std::size_t>(values_.size()); }
  std::uint64_t cardinality() const { return cardinality_; }
  bool weighted() const { return weighted_; }
  const Vector& values() const { return values_; }

  friend bool operator==(const BasicDotHashSketch& a, const BasicDotHashSketch& b) {
    return a.seed_ == b.seed_ && a.cardinality_ == b.cardinality_ &&
           a.weighted_ == b.weighted_ && a.values_.size() == b.values_.size() &&
           a.values_ == b.values_;
  }

 private:
  std::uint64_t seed_;
  Vector values_;
  std::uint64_t cardinality_;
  bool weighted_;
};

using DotHashSketch = BasicDotHashSketch<double>;

struct MinHashSketch {
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t seed = 0;
  std::vector<std::uint64_t> minima;
  std::uint64_t cardinality = 0;

  std::size_t k() const { return minima.size(); }
  friend bool operator==(const MinHashSketch&, const MinHashSketch&) = default;
};

struct SimHashSketch {
  std::uint64_t seed = 0;
  std::size_t dims = 0;
  std::vector<std::uint64_t> words;  // bit j lives in words[j / 64], bit j % 64
  std::uint64_t cardinality = 0;

  bool bit(std::size_t j) const { return (words[j / 64] >> (j % 64)) & 1U; }
  friend bool operator==(const SimHashSketch&, const SimHashSketch&) = default;
};

namespace detail {

void require_compatible(std::uint64_t seed_a, std::uint64_t seed_b, std::size_t dims_a,
                        std::size_t dims_b, const char* dims_name);

}  // namespace detail

/// Sum of sqrt(w(a)) * psi(a) over the distinct elements of `elements`.
template <typename Scalar = double, std::ranges::input_range R>
BasicDotHashSketch<Scalar> dothash_build(const Codebook& codebook, R&& elements,
                                         const WeightFn& weight = WeightFn::unit()) {
  using Vector = typename BasicDotHashSketch<Scalar>::Vector;
  Vector values = Vector::Zero(static_cast<Eigen::Index>(codebook.dims()));
  std::unordered_set<ElementId> seen;
  for (const auto& raw : elements) {
    const ElementId e{raw};
    if (!seen.insert(e).second) continue;
    Scalar magnitude = Scalar(1);
    if (!weight.is_unit()) {
      const double w = weight.at(e);
      if (!(w >= 0.0)) throw DataError("weight function must be nonnegative");
      if (w == 0.0) continue;
      magnitude = static_cast<Scalar>(std::sqrt(w));
    }
    codebook.accumulate<Scalar>(e, magnitude, values);
  }
  return BasicDotHashSketch<Scalar>(codebook.seed(), std::move(values), seen.size(),
                                    !weight.is_unit());
}

/// a . b; unbiased for |A n B| (or the weighted sum when built with weights).
template <typename Scalar>
Scalar dothash_intersection(const BasicDotHashSketch<Scalar>& a,
                            const BasicDotHashSketch<Scalar>& b) {
  detail::require_compatible(a.seed(), b.seed(), a.dims(), b.dims(), "dims");
  return a.values().dot(b.values());
}

/// est / (|A| + |B| - est), clamped to [0, 1]. Unit-weight sketches only.
template <typename Scalar>
Scalar dothash_jaccard(const BasicDotHashSketch<Scalar>& a, const BasicDotHashSketch<Scalar>& b) {
  detail::require_compatible(a.seed(), b.seed(), a.dims(), b.dims(), "dims");
  if (a.weighted() || b.weighted()) {
    throw DataError("Jaccard requires unit-weight sketches");
  }
  if (a.cardinality() == 0 && b.cardinality() == 0) {
    throw DataError("Jaccard undefined for two empty sets");
  }
  const Scalar est = a.values().dot(b.values());
  const Scalar denom = static_cast<Scalar>(a.cardinality() + b.cardinality()) - est;
  if (denom <= Scalar(0)) return Scalar(1);
  return std::clamp(est / denom, Scalar(0), Scalar(1));
}

MinHashSketch minhash_build(const MinwiseFamily& family, std::span<const ElementId> elements);
double minhash_jaccard(const MinHashSketch& a, const MinHashSketch& b);

SimHashSketch simhash_build(const Codebook& codebook, std::span<const ElementId> elements);
/// 1 - hamming / d.
double simhash_similarity(const SimHashSketch& a, const SimHashSketch& b);

}  // namespace dothash
