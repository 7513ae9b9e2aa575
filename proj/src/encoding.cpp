#include "dothash/encoding.hpp"

namespace dothash {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

}  // namespace

ElementId element_id(std::span<const std::byte> bytes) {
  std::uint64_t h = kFnvOffset;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= kFnvPrime;
  }
  return ElementId{fmix64(h)};
}

ElementId element_id(std::string_view text) {
  return element_id(std::as_bytes(std::span(text.data(), text.size())));
}

Codebook::Codebook(std::uint64_t seed, std::size_t dims)
    : seed_(seed), dims_(dims), key_(mix64(seed + kGolden)) {
  if (dims == 0) throw std::invalid_argument("codebook dimension must be positive");
}

MinwiseFamily::MinwiseFamily(std::uint64_t seed, std::size_t k) : seed_(seed) {
  if (k == 0) throw std::invalid_argument("minwise family needs at least one hash");
  const std::uint64_t base = mix64(seed + kGolden);
  keys_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    keys_.push_back(mix64(base + (static_cast<std::uint64_t>(i) + 1) * kGolden));
  }
}

std::uint64_t MinwiseFamily::value(std::size_t i, ElementId e) const {
  if (i >= keys_.size()) throw std::out_of_range("hash index exceeds family size");
  return value_unchecked(i, e);
}

}  // namespace dothash
