#pragma once

// Sketch file layout (all integers little-endian, version 1):
//
//   offset  size  field
//   0       4     magic "DHSK"
//   4       2     format version (1)
//   6       1     kind: 1 = dothash, 2 = minhash, 3 = simhash
//   7       1     flags: bit 0 = dothash built with non-unit weights
//   8       8     seed
//   16      8     dims (dothash, simhash) or k (minhash)
//   24      8     cardinality
//   32      ...   payload
//                   dothash: dims x IEEE-754 binary64
//                   minhash: k x uint64 minima
//                   simhash: ceil(dims / 64) x uint64 words; bit j is bit
//                            (j % 64) of word j / 64, unused bits zero

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dothash/sketches.hpp"

namespace dothash {

enum class SketchKind : std::uint8_t { dothash = 1, minhash = 2, simhash = 3 };

using AnySketch = std::variant<DotHashSketch, MinHashSketch, SimHashSketch>;

inline constexpr std::uint16_t kSketchFormatVersion = 1;

std::string to_string(SketchKind kind);
SketchKind kind_of(const AnySketch& sketch);
std::uint64_t seed_of(const AnySketch& sketch);
std::uint64_t cardinality_of(const AnySketch& sketch);
/// dims for dothash/simhash, k for minhash.
std::size_t size_param_of(const AnySketch& sketch);

std::vector<std::byte> to_bytes(const AnySketch& sketch);
/// Throws DataError on truncated, trailing, or malformed input.
AnySketch from_bytes(std::span<const std::byte> bytes);

void write_sketch_file(const std::string& path, const AnySketch& sketch);
AnySketch read_sketch_file(const std::string& path);

/// Human-readable debug form; round-trips bit-exactly.
nlohmann::json to_json(const AnySketch& sketch);
AnySketch sketch_from_json(const nlohmann::json& j);

}  // namespace dothash
