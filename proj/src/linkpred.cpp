#include "dothash/linkpred.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>

#include "dothash/error.hpp"
#include "dothash/parallel.hpp"
#include "dothash/random.hpp"
#include "dothash/stats.hpp"

namespace dothash {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::jaccard: return "jaccard";
    case Metric::common_neighbors: return "common_neighbors";
    case Metric::adamic_adar: return "adamic_adar";
    case Metric::resource_allocation: return "resource_allocation";
  }
  return "unknown";
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::dothash: return "dothash";
    case Estimator::minhash: return "minhash";
    case Estimator::simhash: return "simhash";
    case Estimator::exact: return "exact";
  }
  return "unknown";
}

Metric parse_metric(const std::string& name) {
  for (Metric m : {Metric::jaccard, Metric::common_neighbors, Metric::adamic_adar,
                   Metric::resource_allocation}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown metric '" + name + "'");
}

Estimator parse_estimator(const std::string& name) {
  for (Estimator e : {Estimator::dothash, Estimator::minhash, Estimator::simhash,
                      Estimator::exact}) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

bool supports(Estimator estimator, Metric metric) {
  if (estimator == Estimator::minhash || estimator == Estimator::simhash) {
    return metric == Metric::jaccard;
  }
  return true;
}

EvalSplit split_edges(const Graph& g, double test_fraction, std::size_t neg_per_pos,
                      std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test fraction must be in (0, 1)");
  }
  if (neg_per_pos < 1) throw std::invalid_argument("negatives per positive must be >= 1");
  if (g.node_count() < 2) throw DataError("graph too small to split");

  Rng rng(seed);
  auto edges = g.edges();
  // The epsilon keeps e.g. 0.1 * 10 from rounding up to 2.
  const auto n_pos = static_cast<std::size_t>(
      std::ceil(test_fraction * static_cast<double>(edges.size()) - 1e-9));
  rng.shuffle(edges.begin(), edges.end());

  EvalSplit split;
  for (std::size_t i = 0; i < n_pos; ++i) split.positives.push_back({edges[i].u, edges[i].v});
  std::sort(split.positives.begin(), split.positives.end());
  split.train = Graph::from_edges(
      g.node_count(), std::span<const Edge>(edges).subspan(n_pos, edges.size() - n_pos));

  const std::size_t wanted = neg_per_pos * split.positives.size();
  const std::size_t budget = 100 * wanted + 1000;
  std::set<NodePair> chosen;
  std::size_t attempts = 0;
  while (split.negatives.size() < wanted) {
    if (attempts++ >= budget) {
      throw DataError("graph too dense: could not sample " + std::to_string(wanted) +
                      " non-edges within " + std::to_string(budget) + " draws");
    }
    auto u = static_cast<NodeId>(rng.below(g.node_count()));
    auto v = static_cast<NodeId>(rng.below(g.node_count()));
    if (u == v || g.has_edge(u, v)) continue;
    if (u > v) std::swap(u, v);
    if (chosen.insert({u, v}).second) split.negatives.push_back({u, v});
  }
  return split;
}

WeightFn metric_weights(const Graph& g, Metric metric, double log_base) {
  if (metric == Metric::jaccard || metric == Metric::common_neighbors) return WeightFn::unit();
  auto weights = std::make_shared<std::vector<double>>(g.node_count(), 0.0);
  const double ln_base = std::log(log_base);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto deg = static_cast<double>(g.degree(v));
    if (metric == Metric::adamic_adar) {
      (*weights)[v] = g.degree(v) > 1 ? ln_base / std::log(deg) : 0.0;
    } else {
      (*weights)[v] = g.degree(v) > 0 ? 1.0 / deg : 0.0;
    }
  }
  const auto kind =
      metric == Metric::adamic_adar ? WeightKind::adamic_adar : WeightKind::resource_allocation;
  return WeightFn::function(kind, [weights](ElementId e) -> std::optional<double> {
    if (e.value >= weights->size()) return std::nullopt;
    return (*weights)[e.value];
  });
}

namespace {

class ExactScorer final : public PairScorer {
 public:
  ExactScorer(const Graph& g, Metric metric, WeightFn weights)
      : graph_(g), metric_(metric), weights_(std::move(weights)) {}

  double score(NodeId u, NodeId v) const override {
    const auto& a = graph_.neighbors(u);
    const auto& b = graph_.neighbors(v);
    switch (metric_) {
      case Metric::jaccard:
        return a.empty() && b.empty() ? 0.0 : exact_jaccard(a, b);
      case Metric::common_neighbors:
        return static_cast<double>(exact_intersection(a, b));
      default:
        return exact_weighted(a, b, weights_);
    }
  }

 private:
  Graph graph_;
  Metric metric_;
  WeightFn weights_;
};

class DotHashScorer final : public PairScorer {
 public:
  DotHashScorer(const Graph& g, Metric metric, const WeightFn& weights,
                const ScorerParams& params)
      : metric_(metric), sketches_(g.node_count()) {
    const Codebook codebook(params.seed, params.dims_or_k);
    parallel_for(g.node_count(), params.workers, [&](std::size_t v) {
      sketches_[v].emplace(
          dothash_build(codebook, g.neighbors(static_cast<NodeId>(v)).elements(), weights));
    });
  }

  double score(NodeId u, NodeId v) const override {
    const auto& a = *sketches_.at(u);
    const auto& b = *sketches_.at(v);
    if (metric_ == Metric::jaccard) {
      return a.cardinality() == 0 && b.cardinality() == 0 ? 0.0 : dothash_jaccard(a, b);
    }
    return dothash_intersection(a, b);
  }

 private:
  Metric metric_;
  std::vector<std::optional<DotHashSketch>> sketches_;
};

class MinHashScorer final : public PairScorer {
 public:
  MinHashScorer(const Graph& g, const ScorerParams& params) : sketches_(g.node_count()) {
    const MinwiseFamily family(params.seed, params.dims_or_k);
    parallel_for(g.node_count(), params.workers, [&](std::size_t v) {
      sketches_[v] = minhash_build(family, g.neighbors(static_cast<NodeId>(v)).elements());
    });
  }

  double score(NodeId u, NodeId v) const override {
    const auto& a = sketches_.at(u);
    const auto& b = sketches_.at(v);
    return a.cardinality == 0 && b.cardinality == 0 ? 0.0 : minhash_jaccard(a, b);
  }

 private:
  std::vector<MinHashSketch> sketches_;
};

class SimHashScorer final : public PairScorer {
 public:
  SimHashScorer(const Graph& g, const ScorerParams& params) : sketches_(g.node_count()) {
    const Codebook codebook(params.seed, params.dims_or_k);
    parallel_for(g.node_count(), params.workers, [&](std::size_t v) {
      sketches_[v] = simhash_build(codebook, g.neighbors(static_cast<NodeId>(v)).elements());
    });
  }

  double score(NodeId u, NodeId v) const override {
    return simhash_similarity(sketches_.at(u), sketches_.at(v));
  }

 private:
  std::vector<SimHashSketch> sketches_;
};

}  // namespace

std::unique_ptr<PairScorer> sketch_neighborhoods(const Graph& g, Metric metric,
                                                 Estimator estimator,
                                                 const ScorerParams& params) {
  if (!supports(estimator, metric)) {
    throw std::invalid_argument("estimator cannot express metric: " + to_string(estimator) +
                                " with " + to_string(metric));
  }
  switch (estimator) {
    case Estimator::exact:
      return std::make_unique<ExactScorer>(g, metric, metric_weights(g, metric, params.log_base));
    case Estimator::dothash:
      return std::make_unique<DotHashScorer>(g, metric, metric_weights(g, metric, params.log_base),
                                             params);
    case Estimator::minhash:
      return std::make_unique<MinHashScorer>(g, params);
    case Estimator::simhash:
      return std::make_unique<SimHashScorer>(g, params);
  }
  throw std::logic_error("unhandled estimator");
}

std::vector<double> score_pairs(const PairScorer& scorer, std::span<const NodePair> pairs,
                                std::size_t workers) {
  std::vector<double> scores(pairs.size());
  parallel_for(pairs.size(), workers,
               [&](std::size_t i) { scores[i] = scorer.score(pairs[i].u, pairs[i].v); });
  return scores;
}

double hits_at_k(std::span<const double> positive_scores, std::span<const double> negative_scores,
                 std::size_t k) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  if (positive_scores.empty()) throw std::invalid_argument("no positive scores");
  if (k > negative_scores.size()) {
    throw std::invalid_argument("K exceeds the number of negatives");
  }
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::nth_element(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(k - 1), neg.end(),
                   std::greater<>());
  const double threshold = neg[k - 1];
  const auto hits = std::count_if(positive_scores.begin(), positive_scores.end(),
                                  [&](double p) { return p > threshold; });
  return static_cast<double>(hits) / static_cast<double>(positive_scores.size());
}

LinkPredResult run_linkpred_benchmark(const Graph& g, const LinkPredConfig& config) {
  if (config.repeats == 0) throw std::invalid_argument("repeats must be >= 1");
  if (config.ks.empty()) throw std::invalid_argument("at least one K is required");
  const EvalSplit split = split_edges(g, config.test_fraction, config.neg_per_pos, config.seed);
  for (std::size_t k : config.ks) {
    if (k < 1 || k > split.negatives.size()) {
      throw std::invalid_argument("K=" + std::to_string(k) + " exceeds the " +
                                  std::to_string(split.negatives.size()) + " sampled negatives");
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  LinkPredResult result;
  for (Estimator estimator : config.estimators) {
    for (Metric metric : config.metrics) {
      if (!supports(estimator, metric)) {
        result.skipped.emplace_back(estimator, metric);
        continue;
      }
      const std::vector<std::size_t> sizes =
          estimator == Estimator::exact ? std::vector<std::size_t>{0} : config.dims_or_k;
      for (std::size_t size : sizes) {
        std::vector<std::vector<double>> hits(config.ks.size());
        double build_total = 0.0;
        double compare_total = 0.0;
        for (std::size_t r = 0; r < config.repeats; ++r) {
          ScorerParams params;
          params.dims_or_k = size == 0 ? 1 : size;
          params.seed = config.seed + r;
          params.workers = config.workers;
          const auto t0 = Clock::now();
          const auto scorer = sketch_neighborhoods(split.train, metric, estimator, params);
          const auto t1 = Clock::now();
          const auto pos = score_pairs(*scorer, split.positives, config.workers);
          const auto neg = score_pairs(*scorer, split.negatives, config.workers);
          const auto t2 = Clock::now();
          build_total += seconds(t0, t1);
          compare_total += seconds(t1, t2);
          for (std::size_t i = 0; i < config.ks.size(); ++i) {
            hits[i].push_back(hits_at_k(pos, neg, config.ks[i]));
          }
        }
        const auto reps = static_cast<double>(config.repeats);
        for (std::size_t i = 0; i < config.ks.size(); ++i) {
          result.rows.push_back({estimator, metric, size, config.ks[i], mean(hits[i]),
                                 ci95_half_width(hits[i]),
                                 config.timing ? build_total / reps : 0.0,
                                 config.timing ? compare_total / reps : 0.0, config.repeats});
        }
      }
    }
  }
  return result;
}

void write_linkpred_csv(std::ostream& out, std::span<const LinkPredRow> rows) {
  out << "estimator,metric,dims_or_k,K,hits_mean,hits_ci95,build_seconds,compare_seconds,"
         "repeats\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%zu\n",
                  to_string(r.estimator).c_str(), to_string(r.metric).c_str(), r.dims_or_k, r.k,
                  r.hits_mean, r.hits_ci95, r.build_seconds, r.compare_seconds, r.repeats);
    out << buf;
  }
}

}  // namespace dothash
