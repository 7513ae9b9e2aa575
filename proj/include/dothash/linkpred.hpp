#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dothash/graph.hpp"
#include "dothash/sketches.hpp"

namespace dothash {

enum class Metric { jaccard, common_neighbors, adamic_adar, resource_allocation };
enum class Estimator { dothash, minhash, simhash, exact };

std::string to_string(Metric m);
std::string to_string(Estimator e);
/// Throws std::invalid_argument for unknown names.
Metric parse_metric(const std::string& name);
Estimator parse_estimator(const std::string& name);

/// Whether `estimator` can score `metric` (MinHash/SimHash only do Jaccard).
bool supports(Estimator estimator, Metric metric);

struct NodePair {
  NodeId u;
  NodeId v;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct EvalSplit {
  Graph train;
  std::vector<NodePair> positives;
  std::vector<NodePair> negatives;
};

/// Holds out ceil(test_fraction * |E|) uniformly chosen edges as positives
/// and rejection-samples neg_per_pos * |positives| distinct non-edges of `g`
/// as negatives. Gives up after 100 draws per wanted negative (plus 1000).
EvalSplit split_edges(const Graph& g, double test_fraction, std::size_t neg_per_pos,
                      std::uint64_t seed);

/// Per-node weight for the metric, from degrees in `g`:
///   adamic_adar          1 / log_base(deg), 0 when deg <= 1
///   resource_allocation  1 / deg, 0 when deg == 0
///   jaccard, common_neighbors  unit
WeightFn metric_weights(const Graph& g, Metric metric, double log_base = std::numbers::e);

class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual double score(NodeId u, NodeId v) const = 0;
};

struct ScorerParams {
  std::size_t dims_or_k = 1024;  // ignored by the exact estimator
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  double log_base = std::numbers::e;
};

/// Sketches (or indexes, for exact) every neighborhood of `g` under the
/// metric's weight function. Jaccard of two empty neighborhoods scores 0.
/// Throws std::invalid_argument("estimator cannot express metric") for
/// unsupported combinations.
std::unique_ptr<PairScorer> sketch_neighborhoods(const Graph& g, Metric metric,
                                                 Estimator estimator, const ScorerParams& params);

std::vector<double> score_pairs(const PairScorer& scorer, std::span<const NodePair> pairs,
                                std::size_t workers = 0);

/// Fraction of positives strictly above the k-th largest negative.
double hits_at_k(std::span<const double> positive_scores, std::span<const double> negative_scores,
                 std::size_t k);

struct LinkPredConfig {
  std::vector<Estimator> estimators = {Estimator::dothash};
  std::vector<Metric> metrics = {Metric::adamic_adar};
  std::vector<std::size_t> dims_or_k = {1024};
  std::vector<std::size_t> ks = {50};
  std::size_t repeats = 5;
  double test_fraction = 0.1;
  std::size_t neg_per_pos = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  bool timing = true;
};

struct LinkPredRow {
  Estimator estimator;
  Metric metric;
  std::size_t dims_or_k;  // 0 for exact
  std::size_t k;
  double hits_mean;
  double hits_ci95;
  double build_seconds;
  double compare_seconds;
  std::size_t repeats;
};

struct LinkPredResult {
  std::vector<LinkPredRow> rows;
  std::vector<std::pair<Estimator, Metric>> skipped;
};

/// One split from `seed`; repeat r sketches with seed + r. Unsupported
/// (estimator, metric) combinations are skipped and listed.
LinkPredResult run_linkpred_benchmark(const Graph& g, const LinkPredConfig& config);

void write_linkpred_csv(std::ostream& out, std::span<const LinkPredRow> rows);

}  // namespace dothash
