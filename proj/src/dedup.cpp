#include "dothash/dedup.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "dothash/error.hpp"
#include "dothash/parallel.hpp"
#include "dothash/random.hpp"

namespace dothash {

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    const bool ascii = c < 0x80;
    if (ascii && (std::isspace(c) || std::ispunct(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ascii ? static_cast<char>(std::tolower(c)) : raw);
  }
  return out;
}

ShingleSet shingle(const Document& doc, std::size_t width) {
  if (width < 1) throw std::invalid_argument("shingle width must be >= 1");
  const std::string norm = normalize_text(doc.text);
  // Token start offsets; tokens are separated by exactly one space.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (i == 0 || norm[i - 1] == ' ') starts.push_back(i);
  }
  std::vector<ElementId> ids;
  if (starts.size() >= width) {
    ids.reserve(starts.size() - width + 1);
    for (std::size_t t = 0; t + width <= starts.size(); ++t) {
      const std::size_t begin = starts[t];
      const std::size_t end = t + width < starts.size() ? starts[t + width] - 1 : norm.size();
      ids.push_back(element_id(std::string_view(norm).substr(begin, end - begin)));
    }
  }
  return {doc.id, SortedSet::from_unsorted(std::move(ids))};
}

IdfTable IdfTable::build(std::span<const ShingleSet> corpus) {
  if (corpus.empty()) throw DataError("cannot build IDF table from an empty corpus");
  IdfTable table;
  table.corpus_size_ = corpus.size();
  for (const auto& doc : corpus) {
    for (ElementId x : doc.shingles) ++table.doc_freq_[x];
  }
  return table;
}

std::size_t IdfTable::doc_freq(ElementId x) const {
  auto it = doc_freq_.find(x);
  return it == doc_freq_.end() ? 0 : it->second;
}

double IdfTable::weight(ElementId x) const {
  const std::size_t df = std::max<std::size_t>(1, doc_freq(x));
  return std::max(0.0, std::log(static_cast<double>(corpus_size_) / static_cast<double>(df)));
}

WeightFn IdfTable::weight_fn() const {
  auto shared = std::make_shared<const IdfTable>(*this);
  return WeightFn::function(WeightKind::idf, [shared](ElementId x) -> std::optional<double> {
    return shared->weight(x);
  });
}

std::vector<Document> load_corpus_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Document doc{j.at("id").get<std::string>(), j.at("text").get<std::string>()};
      if (!ids.insert(doc.id).second) {
        throw DataError("corpus line " + std::to_string(line_no) + ": duplicate id '" + doc.id +
                        "'");
      }
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    out << nlohmann::json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
  }
}

std::vector<DocPair> load_labels_csv(std::istream& in) {
  std::vector<DocPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id_a,id_b") throw DataError("labels file must start with header 'id_a,id_b'");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw DataError("labels line " + std::to_string(line_no) + ": expected 2 fields");
    }
    pairs.emplace_back(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
  }
  return pairs;
}

void write_labels_csv(std::ostream& out, std::span<const DocPair> pairs) {
  out << "id_a,id_b\n";
  for (const auto& [a, b] : pairs) out << a << ',' << b << '\n';
}

namespace {

std::string word(std::size_t rank) { return "w" + std::to_string(rank); }

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cdf_[i] = total;
    }
    for (auto& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.unit();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace

PlantedCorpus planted_corpus(const PlantedCorpusConfig& config) {
  if (config.duplicate_pairs * 2 > config.documents) {
    throw std::invalid_argument("more duplicate pairs than the corpus can hold");
  }
  Rng rng(config.seed);
  const ZipfSampler zipf(config.vocabulary, config.zipf_exponent);

  std::vector<std::vector<std::string>> templates(config.boilerplate_sentences);
  for (auto& t : templates) {
    for (std::size_t i = 0; i < config.boilerplate_words; ++i) t.push_back(word(zipf(rng)));
  }

  const std::size_t originals = config.documents - config.duplicate_pairs;
  PlantedCorpus corpus;
  std::vector<std::vector<std::string>> bodies;
  for (std::size_t d = 0; d < originals; ++d) {
    std::vector<std::string> words;
    if (!templates.empty()) {
      const auto& open = templates[rng.below(templates.size())];
      words.insert(words.end(), open.begin(), open.end());
    }
    for (std::size_t i = 0; i < config.words_per_document; ++i) words.push_back(word(zipf(rng)));
    if (!templates.empty()) {
      const auto& close = templates[rng.below(templates.size())];
      words.insert(words.end(), close.begin(), close.end());
    }
    bodies.push_back(std::move(words));
  }

  for (std::size_t p = 0; p < config.duplicate_pairs; ++p) {
    const auto& source = bodies[p];
    std::vector<std::string> copy;
    for (const auto& w : source) {
      if (!rng.bernoulli(config.edit_rate)) {
        copy.push_back(w);
        continue;
      }
      switch (rng.below(3)) {
        case 0:  // substitute
          copy.push_back(word(zipf(rng)));
          break;
        case 1:  // delete
          break;
        default:  // insert
          copy.push_back(w);
          copy.push_back(word(zipf(rng)));
          break;
      }
    }
    bodies.push_back(std::move(copy));
  }

  // Interleave ids so duplicates are not adjacent to their sources.
  std::vector<std::size_t> order(bodies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  std::vector<std::string> ids(bodies.size());
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "doc%04zu", slot);
    ids[order[slot]] = buf;
  }
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    corpus.documents.push_back({ids[order[slot]], join(bodies[order[slot]])});
  }
  for (std::size_t p = 0; p < config.duplicate_pairs; ++p) {
    corpus.duplicates.emplace_back(ids[p], ids[originals + p]);
  }
  return corpus;
}

std::string to_string(DedupMetric m) { return m == DedupMetric::idf ? "idf" : "jaccard"; }

DedupMetric parse_dedup_metric(const std::string& name) {
  if (name == "idf") return DedupMetric::idf;
  if (name == "jaccard") return DedupMetric::jaccard;
  throw std::invalid_argument("unknown dedup metric '" + name + "'");
}

DedupRow run_dedup_benchmark(std::span<const Document> corpus, std::span<const DocPair> duplicates,
                             const DedupConfig& config) {
  if (config.metric == DedupMetric::idf && config.estimator != Estimator::dothash &&
      config.estimator != Estimator::exact) {
    throw std::invalid_argument("estimator cannot express metric: " + to_string(config.estimator) +
                                " with idf");
  }
  if (config.k < 1) throw std::invalid_argument("K must be >= 1");
  if (corpus.empty()) throw DataError("corpus is empty");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus[i].id, i);
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("label references unknown doc_id '" + id + "'");
    return it->second;
  };

  std::vector<NodePair> positives;
  std::set<NodePair> positive_set;
  for (const auto& [a, b] : duplicates) {
    auto u = static_cast<NodeId>(lookup(a));
    auto v = static_cast<NodeId>(lookup(b));
    if (u > v) std::swap(u, v);
    if (u == v) throw DataError("duplicate label pairs a document with itself: '" + a + "'");
    if (positive_set.insert({u, v}).second) positives.push_back({u, v});
  }
  if (positives.empty()) throw DataError("no duplicate pairs given");

  const std::size_t n = corpus.size();
  const std::size_t available = n * (n - 1) / 2 - positive_set.size();
  const std::size_t wanted = std::min(config.negatives, available);
  if (wanted < config.k) {
    throw DataError("only " + std::to_string(wanted) + " negative pairs available, fewer than K=" +
                    std::to_string(config.k));
  }
  std::vector<NodePair> negatives;
  Rng rng(config.seed);
  if (wanted == available) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (!positive_set.count({u, v})) negatives.push_back({u, v});
      }
    }
  } else {
    std::set<NodePair> chosen;
    while (negatives.size() < wanted) {
      auto u = static_cast<NodeId>(rng.below(n));
      auto v = static_cast<NodeId>(rng.below(n));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (positive_set.count({u, v}) || !chosen.insert({u, v}).second) continue;
      negatives.push_back({u, v});
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  std::vector<ShingleSet> shingles(n);
  parallel_for(n, config.workers,
               [&](std::size_t i) { shingles[i] = shingle(corpus[i], config.shingle_width); });
  const IdfTable idf = IdfTable::build(shingles);
  const WeightFn weights =
      config.metric == DedupMetric::idf ? idf.weight_fn() : WeightFn::unit();

  std::function<double(std::size_t, std::size_t)> score;
  std::vector<std::optional<DotHashSketch>> dot_sketches;
  std::vector<MinHashSketch> min_sketches;
  std::vector<SimHashSketch> sim_sketches;
  std::optional<Codebook> codebook;
  if (config.estimator == Estimator::dothash || config.estimator == Estimator::simhash) {
    codebook.emplace(config.seed, config.dims_or_k);
  }

  switch (config.estimator) {
    case Estimator::exact:
      score = [&](std::size_t a, std::size_t b) {
        const auto& sa = shingles[a].shingles;
        const auto& sb = shingles[b].shingles;
        if (config.metric == DedupMetric::idf) return exact_weighted(sa, sb, weights);
        return sa.empty() && sb.empty() ? 0.0 : exact_jaccard(sa, sb);
      };
      break;
    case Estimator::dothash:
      dot_sketches.resize(n);
      parallel_for(n, config.workers, [&](std::size_t i) {
        dot_sketches[i].emplace(dothash_build(*codebook, shingles[i].shingles.elements(), weights));
      });
      score = [&](std::size_t a, std::size_t b) {
        const auto& sa = *dot_sketches[a];
        const auto& sb = *dot_sketches[b];
        if (config.metric == DedupMetric::idf) return dothash_intersection(sa, sb);
        return sa.cardinality() == 0 && sb.cardinality() == 0 ? 0.0 : dothash_jaccard(sa, sb);
      };
      break;
    case Estimator::minhash: {
      const MinwiseFamily family(config.seed, config.dims_or_k);
      min_sketches.resize(n);
      parallel_for(n, config.workers, [&](std::size_t i) {
        min_sketches[i] = minhash_build(family, shingles[i].shingles.elements());
      });
      score = [&](std::size_t a, std::size_t b) {
        const auto& sa = min_sketches[a];
        const auto& sb = min_sketches[b];
        return sa.cardinality == 0 && sb.cardinality == 0 ? 0.0 : minhash_jaccard(sa, sb);
      };
      break;
    }
    case Estimator::simhash:
      sim_sketches.resize(n);
      parallel_for(n, config.workers, [&](std::size_t i) {
        sim_sketches[i] = simhash_build(*codebook, shingles[i].shingles.elements());
      });
      score = [&](std::size_t a, std::size_t b) {
        return simhash_similarity(sim_sketches[a], sim_sketches[b]);
      };
      break;
  }
  const auto t1 = Clock::now();

  auto score_all = [&](const std::vector<NodePair>& pairs) {
    std::vector<double> out(pairs.size());
    parallel_for(pairs.size(), config.workers,
                 [&](std::size_t i) { out[i] = score(pairs[i].u, pairs[i].v); });
    return out;
  };
  const auto pos = score_all(positives);
  const auto neg = score_all(negatives);
  const auto t2 = Clock::now();

  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  return {config.estimator,
          config.metric,
          config.estimator == Estimator::exact ? 0 : config.dims_or_k,
          config.k,
          hits_at_k(pos, neg, config.k),
          config.timing ? seconds(t0, t1) : 0.0,
          config.timing ? seconds(t1, t2) : 0.0,
          positives.size(),
          negatives.size()};
}

void write_dedup_csv(std::ostream& out, std::span<const DedupRow> rows) {
  out << "estimator,metric,dims_or_k,K,hits,build_seconds,compare_seconds,positives,negatives\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%.6f,%.6f,%.6f,%zu,%zu\n",
                  to_string(r.estimator).c_str(), to_string(r.metric).c_str(), r.dims_or_k, r.k,
                  r.hits, r.build_seconds, r.compare_seconds, r.positives, r.negatives);
    out << buf;
  }
}

}  // namespace dothash
