#include "dothash/serialize.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <iterator>

namespace dothash {

namespace {

constexpr std::array<std::byte, 4> kMagic = {std::byte{'D'}, std::byte{'H'}, std::byte{'S'},
                                             std::byte{'K'}};
constexpr std::size_t kHeaderSize = 32;
constexpr std::uint8_t kFlagWeighted = 1;

class Writer {
 public:
  void bytes(std::span<const std::byte> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  template <typename T>
  void le(T value) {
    auto u = static_cast<std::uint64_t>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::byte>((u >> (8 * i)) & 0xffU));
    }
  }

  void f64(double x) { le(std::bit_cast<std::uint64_t>(x)); }

  std::vector<std::byte> take() { return std::move(out_); }

 private:
  std::vector<std::byte> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}

  template <typename T>
  T le() {
    need(sizeof(T));
    std::uint64_t u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }

  std::span<const std::byte> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DataError("sketch data truncated");
  }

  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::dothash: return "dothash";
    case SketchKind::minhash: return "minhash";
    case SketchKind::simhash: return "simhash";
  }
  return "unknown";
}

SketchKind kind_of(const AnySketch& sketch) {
  return static_cast<SketchKind>(sketch.index() + 1);
}

std::uint64_t seed_of(const AnySketch& sketch) {
  return std::visit(
      [](const auto& s) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DotHashSketch>) {
          return s.seed();
        } else {
          return s.seed;
        }
      },
      sketch);
}

std::uint64_t cardinality_of(const AnySketch& sketch) {
  return std::visit(
      [](const auto& s) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DotHashSketch>) {
          return s.cardinality();
        } else {
          return s.cardinality;
        }
      },
      sketch);
}

std::size_t size_param_of(const AnySketch& sketch) {
  if (auto* d = std::get_if<DotHashSketch>(&sketch)) return d->dims();
  if (auto* m = std::get_if<MinHashSketch>(&sketch)) return m->k();
  return std::get<SimHashSketch>(sketch).dims;
}

std::vector<std::byte> to_bytes(const AnySketch& sketch) {
  Writer w;
  w.bytes(kMagic);
  w.le<std::uint16_t>(kSketchFormatVersion);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(kind_of(sketch)));
  std::uint8_t flags = 0;
  if (auto* d = std::get_if<DotHashSketch>(&sketch); d && d->weighted()) flags |= kFlagWeighted;
  w.le<std::uint8_t>(flags);
  w.le<std::uint64_t>(seed_of(sketch));
  w.le<std::uint64_t>(size_param_of(sketch));
  w.le<std::uint64_t>(cardinality_of(sketch));
  if (auto* d = std::get_if<DotHashSketch>(&sketch)) {
    for (Eigen::Index i = 0; i < d->values().size(); ++i) w.f64(d->values()[i]);
  } else if (auto* m = std::get_if<MinHashSketch>(&sketch)) {
    for (std::uint64_t v : m->minima) w.le(v);
  } else {
    for (std::uint64_t v : std::get<SimHashSketch>(sketch).words) w.le(v);
  }
  return w.take();
}

AnySketch from_bytes(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize) throw DataError("sketch data truncated");
  Reader r(bytes);
  auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw DataError("not a sketch file (bad magic)");
  }
  const auto version = r.le<std::uint16_t>();
  if (version != kSketchFormatVersion) {
    throw DataError("unsupported sketch format version " + std::to_string(version));
  }
  const auto kind = r.le<std::uint8_t>();
  const auto flags = r.le<std::uint8_t>();
  const auto seed = r.le<std::uint64_t>();
  const auto size = r.le<std::uint64_t>();
  const auto cardinality = r.le<std::uint64_t>();
  if (size == 0) throw DataError("sketch size must be positive");

  auto check_payload = [&](std::uint64_t words) {
    if (r.remaining() != words * 8) {
      throw DataError("sketch payload size does not match header");
    }
  };

  switch (kind) {
    case static_cast<std::uint8_t>(SketchKind::dothash): {
      check_payload(size);
      DotHashSketch::Vector values(static_cast<Eigen::Index>(size));
      for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = r.f64();
      return DotHashSketch(seed, std::move(values), cardinality, (flags & kFlagWeighted) != 0);
    }
    case static_cast<std::uint8_t>(SketchKind::minhash): {
      check_payload(size);
      MinHashSketch m;
      m.seed = seed;
      m.cardinality = cardinality;
      m.minima.resize(size);
      for (auto& v : m.minima) v = r.le<std::uint64_t>();
      return m;
    }
    case static_cast<std::uint8_t>(SketchKind::simhash): {
      const std::uint64_t words = (size + 63) / 64;
      check_payload(words);
      SimHashSketch s;
      s.seed = seed;
      s.dims = size;
      s.cardinality = cardinality;
      s.words.resize(words);
      for (auto& v : s.words) v = r.le<std::uint64_t>();
      if (size % 64 != 0 && (s.words.back() >> (size % 64)) != 0) {
        throw DataError("simhash padding bits must be zero");
      }
      return s;
    }
    default:
      throw DataError("unknown sketch kind " + std::to_string(kind));
  }
}

void write_sketch_file(const std::string& path, const AnySketch& sketch) {
  const auto bytes = to_bytes(sketch);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

AnySketch read_sketch_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_bytes(std::as_bytes(std::span(raw.data(), raw.size())));
}

nlohmann::json to_json(const AnySketch& sketch) {
  nlohmann::json j;
  j["kind"] = to_string(kind_of(sketch));
  j["seed"] = seed_of(sketch);
  j["cardinality"] = cardinality_of(sketch);
  if (auto* d = std::get_if<DotHashSketch>(&sketch)) {
    j["dims"] = d->dims();
    j["weighted"] = d->weighted();
    j["values"] = std::vector<double>(d->values().data(), d->values().data() + d->dims());
  } else if (auto* m = std::get_if<MinHashSketch>(&sketch)) {
    j["k"] = m->k();
    j["minima"] = m->minima;
  } else {
    const auto& s = std::get<SimHashSketch>(sketch);
    j["dims"] = s.dims;
    std::string bits(s.dims, '0');
    for (std::size_t i = 0; i < s.dims; ++i) bits[i] = s.bit(i) ? '1' : '0';
    j["bits"] = bits;
  }
  return j;
}

AnySketch sketch_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto cardinality = j.at("cardinality").get<std::uint64_t>();
    if (kind == "dothash") {
      const auto values = j.at("values").get<std::vector<double>>();
      DotHashSketch::Vector v = Eigen::Map<const DotHashSketch::Vector>(
          values.data(), static_cast<Eigen::Index>(values.size()));
      return DotHashSketch(seed, std::move(v), cardinality, j.value("weighted", false));
    }
    if (kind == "minhash") {
      MinHashSketch m;
      m.seed = seed;
      m.cardinality = cardinality;
      m.minima = j.at("minima").get<std::vector<std::uint64_t>>();
      return m;
    }
    if (kind == "simhash") {
      const auto bits = j.at("bits").get<std::string>();
      SimHashSketch s;
      s.seed = seed;
      s.dims = bits.size();
      s.cardinality = cardinality;
      s.words.assign((bits.size() + 63) / 64, 0);
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') s.words[i / 64] |= std::uint64_t{1} << (i % 64);
      }
      return s;
    }
    throw DataError("unknown sketch kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed sketch json: ") + e.what());
  }
}

}  // namespace dothash
