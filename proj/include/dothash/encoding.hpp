#pragma once

// Deterministic element encodings shared by every estimator.
//
// Hash algorithms (fixed; changing any of them changes every sketch byte):
//
//   element_id(bytes)     FNV-1a/64 over the bytes, then the MurmurHash3
//                         fmix64 finalizer.
//   mix64(x)              SplitMix64 output function (Stafford "Mix13").
//   Codebook sign words   For element e under seed s the 64-bit sign word of
//                         block b is the (b+1)-th output of a SplitMix64
//                         stream whose state starts at
//                         mix64(mix64(s + GOLDEN) ^ e):
//                             word(b) = mix64(state + (b + 1) * GOLDEN)
//                         Coordinate j takes bit (j % 64) of word(j / 64);
//                         bit 1 means +1/sqrt(d), bit 0 means -1/sqrt(d).
//   Minwise hash i        key_i = mix64(mix64(s + GOLDEN) + (i + 1) * GOLDEN)
//                         h_i(e) = mix64(mix64(e ^ key_i) ^ rotl(key_i, 32))

#include <bit>
#include <compare>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dothash {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Stable 64-bit identity of a set element.
struct ElementId {
  std::uint64_t value = 0;

  constexpr ElementId() = default;
  constexpr explicit ElementId(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

/// FNV-1a/64 + fmix64 digest of an arbitrary byte string.
ElementId element_id(std::span<const std::byte> bytes);
ElementId element_id(std::string_view text);

class Codebook {
 public:
  Codebook(std::uint64_t seed, std::size_t dims);

  std::uint64_t seed() const { return seed_; }
  std::size_t dims() const { return dims_; }
  std::size_t blocks() const { return (dims_ + 63) / 64; }

  /// 64 sign bits for coordinates [64 * block, 64 * block + 64).
  std::uint64_t sign_word(ElementId e, std::size_t block) const {
    const std::uint64_t state = mix64(key_ ^ e.value);
    return mix64(state + (static_cast<std::uint64_t>(block) + 1) * kGolden);
  }

  /// out += magnitude * psi(e). `magnitude` is the Euclidean length of the
  /// added vector, so a unit-weight element uses magnitude 1.
  template <typename Scalar>
  void accumulate(ElementId e, Scalar magnitude,
                  Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> out) const {
    if (static_cast<std::size_t>(out.size()) != dims_) {
      throw std::invalid_argument("codebook dimension mismatch");
    }
    const Scalar entry = magnitude / std::sqrt(static_cast<Scalar>(dims_));
    const Scalar table[2] = {-entry, entry};
    const std::uint64_t state = mix64(key_ ^ e.value);
    Scalar* data = out.data();
    for (std::size_t b = 0, base = 0; base < dims_; ++b, base += 64) {
      std::uint64_t bits = mix64(state + (static_cast<std::uint64_t>(b) + 1) * kGolden);
      const std::size_t n = dims_ - base < 64 ? dims_ - base : 64;
      for (std::size_t j = 0; j < n; ++j, bits >>= 1) {
        data[base + j] += table[bits & 1U];
      }
    }
  }

  /// The codebook vector of `e`: d entries in {-1/sqrt(d), +1/sqrt(d)}.
  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector_of(ElementId e) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(dims_));
    accumulate<Scalar>(e, Scalar(1), v);
    return v;
  }

 private:
  std::uint64_t seed_;
  std::size_t dims_;
  std::uint64_t key_;
};

/// k seeded 64-bit mixing functions standing in for a min-wise family.
class MinwiseFamily {
 public:
  MinwiseFamily(std::uint64_t seed, std::size_t k);

  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return keys_.size(); }

  std::uint64_t value(std::size_t i, ElementId e) const;

  // Unchecked; i < size().
  std::uint64_t value_unchecked(std::size_t i, ElementId e) const {
    const std::uint64_t key = keys_[i];
    return mix64(mix64(e.value ^ key) ^ std::rotl(key, 32));
  }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> keys_;
};

}  // namespace dothash

template <>
struct std::hash<dothash::ElementId> {
  std::size_t operator()(dothash::ElementId e) const noexcept {
    return static_cast<std::size_t>(dothash::mix64(e.value));
  }
};
