#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dothash/exact.hpp"
#include "dothash/linkpred.hpp"
#include "dothash/sketches.hpp"

namespace dothash {

struct Document {
  std::string id;
  std::string text;
};

struct ShingleSet {
  std::string doc_id;
  SortedSet shingles;
};

using DocPair = std::pair<std::string, std::string>;

/// ASCII lowercase, ASCII punctuation -> space, whitespace runs collapsed to
/// one space, trimmed. Bytes >= 0x80 pass through unchanged.
std::string normalize_text(std::string_view text);

/// Hashes each run of `width` consecutive normalized tokens, joined by a
/// single space, with element_id.
ShingleSet shingle(const Document& doc, std::size_t width);

class IdfTable {
 public:
  /// Throws DataError on an empty corpus.
  static IdfTable build(std::span<const ShingleSet> corpus);

  std::size_t corpus_size() const { return corpus_size_; }
  /// Stored document frequency, 0 for unseen shingles.
  std::size_t doc_freq(ElementId x) const;
  /// ln(|D| / df(x)), with df = 1 for unseen shingles.
  double weight(ElementId x) const;
  WeightFn weight_fn() const;

 private:
  std::size_t corpus_size_ = 0;
  std::unordered_map<ElementId, std::size_t> doc_freq_;
};

/// One JSON object per line with string fields "id" and "text".
std::vector<Document> load_corpus_jsonl(std::istream& in);
void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs);
/// CSV with header "id_a,id_b".
std::vector<DocPair> load_labels_csv(std::istream& in);
void write_labels_csv(std::ostream& out, std::span<const DocPair> pairs);

struct PlantedCorpusConfig {
  std::size_t documents = 200;
  std::size_t duplicate_pairs = 50;
  std::size_t words_per_document = 120;
  std::size_t vocabulary = 4000;
  double zipf_exponent = 1.0;
  double edit_rate = 0.10;
  /// Shared template sentences; each document opens and closes with one.
  std::size_t boilerplate_sentences = 4;
  std::size_t boilerplate_words = 12;
  std::uint64_t seed = 7;
};

struct PlantedCorpus {
  std::vector<Document> documents;
  std::vector<DocPair> duplicates;
};

/// Originals are Zipf-distributed word sequences over a synthetic
/// vocabulary; each duplicate copies an original and edits every word with
/// probability edit_rate (substitute, delete, or insert, equally likely).
PlantedCorpus planted_corpus(const PlantedCorpusConfig& config);

enum class DedupMetric { jaccard, idf };

std::string to_string(DedupMetric m);
DedupMetric parse_dedup_metric(const std::string& name);

struct DedupConfig {
  Estimator estimator = Estimator::dothash;
  DedupMetric metric = DedupMetric::idf;
  std::size_t dims_or_k = 10000;
  std::size_t shingle_width = 3;
  std::size_t k = 25;
  std::size_t negatives = 1000;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  bool timing = true;
};

struct DedupRow {
  Estimator estimator;
  DedupMetric metric;
  std::size_t dims_or_k;
  std::size_t k;
  double hits;
  double build_seconds;
  double compare_seconds;
  std::size_t positives;
  std::size_t negatives;
};

/// Scores the labeled duplicates against uniformly sampled non-duplicate
/// pairs (Rng(seed)); sketches use codebook / family seed `seed`.
DedupRow run_dedup_benchmark(std::span<const Document> corpus, std::span<const DocPair> duplicates,
                             const DedupConfig& config);

void write_dedup_csv(std::ostream& out, std::span<const DedupRow> rows);

}  // namespace dothash
