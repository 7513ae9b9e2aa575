#include "dothash/sketches.hpp"

#include <bit>
#include <sstream>

namespace dothash {

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::unit: return "unit";
    case WeightKind::adamic_adar: return "adamic_adar";
    case WeightKind::resource_allocation: return "resource_allocation";
    case WeightKind::idf: return "idf";
    case WeightKind::custom: return "custom";
  }
  return "unknown";
}

WeightFn WeightFn::unit() { return WeightFn(WeightKind::unit, nullptr); }

WeightFn WeightFn::table(WeightKind kind, std::unordered_map<ElementId, double> weights) {
  for (const auto& [e, w] : weights) {
    if (!(w >= 0.0)) throw DataError("weight function must be nonnegative");
  }
  auto shared = std::make_shared<const std::unordered_map<ElementId, double>>(std::move(weights));
  return WeightFn(kind, [shared](ElementId e) -> std::optional<double> {
    auto it = shared->find(e);
    if (it == shared->end()) return std::nullopt;
    return it->second;
  });
}

WeightFn WeightFn::function(WeightKind kind, Lookup lookup) {
  if (kind == WeightKind::unit || !lookup) return unit();
  return WeightFn(kind, std::move(lookup));
}

double WeightFn::at(ElementId e) const {
  auto w = find(e);
  if (!w) throw DataError("weight not defined for element");
  return *w;
}

namespace detail {

void require_compatible(std::uint64_t seed_a, std::uint64_t seed_b, std::size_t dims_a,
                        std::size_t dims_b, const char* dims_name) {
  if (seed_a != seed_b) {
    std::ostringstream msg;
    msg << "incompatible sketches: seed differs (" << seed_a << " vs " << seed_b << ")";
    throw DataError(msg.str());
  }
  if (dims_a != dims_b) {
    std::ostringstream msg;
    msg << "incompatible sketches: " << dims_name << " differs (" << dims_a << " vs " << dims_b
        << ")";
    throw DataError(msg.str());
  }
}

}  // namespace detail

MinHashSketch minhash_build(const MinwiseFamily& family, std::span<const ElementId> elements) {
  MinHashSketch sketch;
  sketch.seed = family.seed();
  sketch.minima.assign(family.size(), MinHashSketch::kEmpty);
  std::unordered_set<ElementId> seen;
  for (ElementId e : elements) {
    if (!seen.insert(e).second) continue;
    for (std::size_t i = 0; i < family.size(); ++i) {
      sketch.minima[i] = std::min(sketch.minima[i], family.value_unchecked(i, e));
    }
  }
  sketch.cardinality = seen.size();
  return sketch;
}

double minhash_jaccard(const MinHashSketch& a, const MinHashSketch& b) {
  detail::require_compatible(a.seed, b.seed, a.k(), b.k(), "k");
  if (a.k() == 0) throw DataError("minhash sketch has no hashes");
  if (a.cardinality == 0 && b.cardinality == 0) {
    throw DataError("Jaccard undefined for two empty sets");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.k(); ++i) matches += a.minima[i] == b.minima[i];
  return static_cast<double>(matches) / static_cast<double>(a.k());
}

SimHashSketch simhash_build(const Codebook& codebook, std::span<const ElementId> elements) {
  const std::size_t d = codebook.dims();
  std::vector<std::int64_t> counts(d, 0);
  std::unordered_set<ElementId> seen;
  for (ElementId e : elements) {
    if (!seen.insert(e).second) continue;
    for (std::size_t b = 0, base = 0; base < d; ++b, base += 64) {
      std::uint64_t bits = codebook.sign_word(e, b);
      const std::size_t n = std::min<std::size_t>(64, d - base);
      for (std::size_t j = 0; j < n; ++j, bits >>= 1) {
        counts[base + j] += (bits & 1U) ? 1 : -1;
      }
    }
  }
  SimHashSketch sketch;
  sketch.seed = codebook.seed();
  sketch.dims = d;
  sketch.cardinality = seen.size();
  sketch.words.assign(codebook.blocks(), 0);
  for (std::size_t j = 0; j < d; ++j) {
    if (counts[j] > 0) sketch.words[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return sketch;
}

double simhash_similarity(const SimHashSketch& a, const SimHashSketch& b) {
  detail::require_compatible(a.seed, b.seed, a.dims, b.dims, "dims");
  if (a.dims == 0) throw DataError("simhash sketch has no bits");
  std::size_t distance = 0;
  for (std::size_t w = 0; w < a.words.size(); ++w) {
    distance += static_cast<std::size_t>(std::popcount(a.words[w] ^ b.words[w]));
  }
  return 1.0 - static_cast<double>(distance) / static_cast<double>(a.dims);
}

}  // namespace dothash
