// dothash: command-line front end for the sketching library.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dothash/bounds.hpp"
#include "dothash/dedup.hpp"
#include "dothash/encoding.hpp"
#include "dothash/error.hpp"
#include "dothash/graph.hpp"
#include "dothash/linkpred.hpp"
#include "dothash/serialize.hpp"
#include "dothash/sketches.hpp"

namespace {

using namespace dothash;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

/// Owns a file stream, or forwards to stdout/stdin for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw DataError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw DataError("cannot open '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

// ---- sketch ---------------------------------------------------------------

struct SketchArgs {
  std::string input = "-";
  std::string output;
  std::string estimator = "dothash";
  std::size_t size = 1024;
  std::uint64_t seed = 0;
  std::string weights;
};

int run_sketch(const SketchArgs& args) {
  Input in(args.input);
  std::vector<ElementId> elements;
  for (std::string line; std::getline(in.stream(), line);) {
    line = strip_cr(line);
    if (line.empty()) continue;
    elements.push_back(element_id(line));
  }

  if (!args.weights.empty() && args.estimator != "dothash") {
    throw std::invalid_argument("--weights is only meaningful for dothash");
  }
  AnySketch sketch = MinHashSketch{};
  if (args.estimator == "dothash") {
    WeightFn weights = WeightFn::unit();
    if (!args.weights.empty()) {
      Input win(args.weights);
      std::unordered_map<ElementId, double> table;
      std::size_t line_no = 0;
      for (std::string line; std::getline(win.stream(), line);) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto sep = line.find_last_of(" \t");
        if (sep == std::string::npos) {
          throw DataError("weights line " + std::to_string(line_no) + ": expected 'token weight'");
        }
        double w = 0.0;
        try {
          w = std::stod(line.substr(sep + 1));
        } catch (const std::exception&) {
          throw DataError("weights line " + std::to_string(line_no) + ": bad weight");
        }
        table[element_id(line.substr(0, line.find_last_not_of(" \t", sep) + 1))] = w;
      }
      weights = WeightFn::table(WeightKind::custom, std::move(table));
    }
    sketch = dothash_build(Codebook(args.seed, args.size), elements, weights);
  } else if (args.estimator == "minhash") {
    sketch = minhash_build(MinwiseFamily(args.seed, args.size), elements);
  } else if (args.estimator == "simhash") {
    sketch = simhash_build(Codebook(args.seed, args.size), elements);
  } else {
    throw std::invalid_argument("unknown estimator '" + args.estimator + "'");
  }

  write_sketch_file(args.output, sketch);
  nlohmann::json summary;
  summary["kind"] = to_string(kind_of(sketch));
  summary[kind_of(sketch) == SketchKind::minhash ? "k" : "dims"] = size_param_of(sketch);
  summary["cardinality"] = cardinality_of(sketch);
  summary["seed"] = seed_of(sketch);
  summary["output"] = args.output;
  std::cout << summary.dump() << '\n';
  return 0;
}

// ---- compare --------------------------------------------------------------

struct CompareArgs {
  std::string a;
  std::string b;
  std::string view;
};

int run_compare(const CompareArgs& args) {
  const AnySketch a = read_sketch_file(args.a);
  const AnySketch b = read_sketch_file(args.b);
  if (kind_of(a) != kind_of(b)) {
    throw DataError("incompatible sketches: kind differs (" + to_string(kind_of(a)) + " vs " +
                    to_string(kind_of(b)) + ")");
  }
  const SketchKind kind = kind_of(a);
  std::string view = args.view;
  if (view.empty()) view = kind == SketchKind::dothash ? "intersection" : "jaccard";
  if (view != "intersection" && view != "jaccard") {
    throw std::invalid_argument("--view must be 'intersection' or 'jaccard'");
  }
  if (view == "intersection" && kind != SketchKind::dothash) {
    throw std::invalid_argument("intersection view requires dothash sketches");
  }

  double estimate = 0.0;
  std::string metric = view;
  switch (kind) {
    case SketchKind::dothash: {
      const auto& da = std::get<DotHashSketch>(a);
      const auto& db = std::get<DotHashSketch>(b);
      if (view == "intersection") {
        estimate = dothash_intersection(da, db);
        if (da.weighted() || db.weighted()) metric = "weighted_intersection";
      } else {
        estimate = dothash_jaccard(da, db);
      }
      break;
    }
    case SketchKind::minhash:
      estimate = minhash_jaccard(std::get<MinHashSketch>(a), std::get<MinHashSketch>(b));
      break;
    case SketchKind::simhash:
      estimate = simhash_similarity(std::get<SimHashSketch>(a), std::get<SimHashSketch>(b));
      metric = "similarity";
      break;
  }

  nlohmann::json out;
  out["estimate"] = estimate;
  out["metric"] = metric;
  out["kind"] = to_string(kind);
  out["dims_or_k"] = size_param_of(a);
  out["cardinalities"] = {cardinality_of(a), cardinality_of(b)};
  std::cout << out.dump() << '\n';
  return 0;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  BoundsSweepConfig sweep;
  double eps_min = 0.025;
  double eps_max = 0.5;
  std::size_t eps_steps = 20;
  double prob = 0.0;
  std::string output = "-";
};

int run_bounds(BoundsArgs args) {
  args.sweep.epsilons = linspace(args.eps_min, args.eps_max, args.eps_steps);
  const auto rows = bounds_sweep(args.sweep);
  Output out(args.output);
  out.stream() << "d,epsilon,chebyshev,clt,empirical\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.9f,%.9f,%.6f\n", r.dims, r.epsilon, r.chebyshev,
                  r.clt, r.empirical);
    out.stream() << buf;
  }
  if (args.prob > 0.0) {
    nlohmann::json req = nlohmann::json::array();
    for (double eps : args.sweep.epsilons) {
      BoundsQuery q{args.sweep.size_a, args.sweep.size_b, args.sweep.size_int, 1, eps, args.prob};
      req.push_back({{"epsilon", eps}, {"required_dims", required_dims(q)}});
    }
    (args.output == "-" ? std::cerr : std::cout)
        << nlohmann::json{{"prob", args.prob}, {"required_dims", req}}.dump() << '\n';
  }
  return 0;
}

// ---- linkpred -------------------------------------------------------------

struct LinkPredArgs {
  std::string edges;
  std::vector<std::string> estimators = {"dothash"};
  std::vector<std::string> metrics = {"adamic_adar"};
  LinkPredConfig config;
  bool no_timing = false;
  std::string output = "-";
};

int run_linkpred(LinkPredArgs args) {
  args.config.estimators.clear();
  args.config.metrics.clear();
  for (const auto& e : args.estimators) args.config.estimators.push_back(parse_estimator(e));
  for (const auto& m : args.metrics) args.config.metrics.push_back(parse_metric(m));
  args.config.timing = !args.no_timing;

  const LoadedGraph loaded = load_edge_list_file(args.edges);
  const auto result = run_linkpred_benchmark(loaded.graph, args.config);
  for (const auto& [e, m] : result.skipped) {
    std::cerr << "skipped: " << to_string(e) << " cannot express " << to_string(m) << '\n';
  }
  if (result.rows.empty()) throw std::invalid_argument("no supported estimator/metric pairs");
  Output out(args.output);
  write_linkpred_csv(out.stream(), result.rows);
  return 0;
}

// ---- dedup ----------------------------------------------------------------

struct DedupArgs {
  std::string corpus;
  std::string labels;
  std::string estimator = "dothash";
  std::string metric = "idf";
  DedupConfig config;
  bool no_timing = false;
  std::string output = "-";
};

int run_dedup(DedupArgs args) {
  args.config.estimator = parse_estimator(args.estimator);
  args.config.metric = parse_dedup_metric(args.metric);
  args.config.timing = !args.no_timing;
  Input corpus_in(args.corpus);
  Input labels_in(args.labels);
  const auto docs = load_corpus_jsonl(corpus_in.stream());
  const auto labels = load_labels_csv(labels_in.stream());
  const DedupRow row = run_dedup_benchmark(docs, labels, args.config);
  Output out(args.output);
  write_dedup_csv(out.stream(), std::span(&row, 1));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-similarity sketching: DotHash, MinHash and SimHash estimators, error bounds, "
               "link prediction and document deduplication benchmarks."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dothash 1.0.0");
  std::size_t workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)")
      ->default_val(0);

  SketchArgs sketch_args;
  auto* sketch = app.add_subcommand(
      "sketch",
      "Sketch a set read as one element token per line (empty lines ignored). Each token is "
      "hashed with FNV-1a/64 + fmix64. Writes the binary sketch file and prints a JSON summary.");
  sketch->add_option("-i,--input", sketch_args.input, "Element file, '-' for stdin")
      ->default_val("-");
  sketch->add_option("-o,--output", sketch_args.output, "Sketch file to write")->required();
  sketch->add_option("-e,--estimator", sketch_args.estimator, "dothash | minhash | simhash")
      ->default_val("dothash")
      ->check(CLI::IsMember({"dothash", "minhash", "simhash"}));
  sketch->add_option("-d,--dims,-k", sketch_args.size,
                     "Dimensions (dothash, simhash) or number of hashes (minhash)")
      ->default_val(1024)
      ->check(CLI::PositiveNumber);
  sketch->add_option("-s,--seed", sketch_args.seed, "Codebook / hash-family seed")->default_val(0);
  sketch->add_option("-w,--weights", sketch_args.weights,
                     "dothash only: lines 'token weight' giving f(x) >= 0 for every element");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare",
      "Compare two sketch files of the same kind, seed and size. Prints JSON {estimate, metric, "
      "kind, dims_or_k, cardinalities}.");
  compare->add_option("a", compare_args.a, "First sketch file")->required();
  compare->add_option("b", compare_args.b, "Second sketch file")->required();
  compare->add_option("--view", compare_args.view,
                      "intersection (dothash only; default for dothash) | jaccard");

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand(
      "bounds",
      "Chebyshev and CLT tail probabilities P(|X - mu| >= eps mu) for the DotHash intersection "
      "estimate, plus an optional Monte-Carlo column. CSV columns: d,epsilon,chebyshev,clt,"
      "empirical (nan when --trials 0).");
  bounds->add_option("--size-a", bounds_args.sweep.size_a, "|A|")->default_val(200);
  bounds->add_option("--size-b", bounds_args.sweep.size_b, "|B|")->default_val(200);
  bounds->add_option("--size-int", bounds_args.sweep.size_int, "|A n B|")->default_val(100);
  bounds->add_option("-d,--dims", bounds_args.sweep.dims, "Dimensions to sweep")
      ->default_str("256 512 1024");
  bounds->add_option("--eps-min", bounds_args.eps_min, "Smallest relative error")
      ->default_val(0.025);
  bounds->add_option("--eps-max", bounds_args.eps_max, "Largest relative error")->default_val(0.5);
  bounds->add_option("--eps-steps", bounds_args.eps_steps, "Grid points")->default_val(20);
  bounds->add_option("--trials", bounds_args.sweep.trials,
                     "Monte-Carlo codebook seeds per dimension (trial t uses seed + t)")
      ->default_val(0);
  bounds->add_option("-s,--seed", bounds_args.sweep.seed, "Base seed")->default_val(0);
  bounds->add_option("--prob", bounds_args.prob,
                     "Also print required dims for this failure probability as JSON")
      ->check(CLI::Range(0.0, 1.0));
  bounds->add_option("-o,--output", bounds_args.output, "CSV path, '-' for stdout")
      ->default_val("-");

  LinkPredArgs lp_args;
  auto* linkpred = app.add_subcommand(
      "linkpred",
      "Link-prediction Hits@K benchmark. Edge list: 'u v' per line, '#' comments. One split from "
      "--seed; repeat r sketches with seed + r. CSV columns: estimator,metric,dims_or_k,K,"
      "hits_mean,hits_ci95,build_seconds,compare_seconds,repeats.");
  linkpred->add_option("--edges", lp_args.edges, "Edge-list file")->required();
  linkpred->add_option("-e,--estimator", lp_args.estimators,
                       "dothash | minhash | simhash | exact (repeatable)")
      ->default_str("dothash");
  linkpred->add_option("-m,--metric", lp_args.metrics,
                       "jaccard | common_neighbors | adamic_adar | resource_allocation "
                       "(repeatable)")
      ->default_str("adamic_adar");
  linkpred->add_option("-d,--dims,-k", lp_args.config.dims_or_k, "Dims or hash counts to sweep")
      ->default_str("1024");
  linkpred->add_option("--test-fraction", lp_args.config.test_fraction,
                       "Fraction of edges held out as positives")
      ->default_val(0.1);
  linkpred->add_option("--neg-per-pos", lp_args.config.neg_per_pos,
                       "Sampled non-edges per positive")
      ->default_val(1);
  linkpred->add_option("-K,--hits-k", lp_args.config.ks, "K values for Hits@K")->default_str("50");
  linkpred->add_option("--repeats", lp_args.config.repeats, "Sketch seeds per point")
      ->default_val(5);
  linkpred->add_option("-s,--seed", lp_args.config.seed, "Base seed")->default_val(0);
  linkpred->add_flag("--no-timing", lp_args.no_timing,
                     "Write 0 for the timing columns (byte-reproducible output)");
  linkpred->add_option("-o,--output", lp_args.output, "CSV path, '-' for stdout")
      ->default_val("-");

  DedupArgs dd_args;
  auto* dedup = app.add_subcommand(
      "dedup",
      "Near-duplicate detection Hits@K benchmark. Corpus: JSON lines {\"id\", \"text\"}. "
      "Labels: CSV with header id_a,id_b. CSV columns: estimator,metric,dims_or_k,K,hits,"
      "build_seconds,compare_seconds,positives,negatives.");
  dedup->add_option("--corpus", dd_args.corpus, "Corpus JSONL")->required();
  dedup->add_option("--labels", dd_args.labels, "Duplicate-pair CSV")->required();
  dedup->add_option("-e,--estimator", dd_args.estimator, "dothash | minhash | simhash | exact")
      ->default_val("dothash");
  dedup->add_option("-m,--metric", dd_args.metric, "idf | jaccard")->default_val("idf");
  dedup->add_option("-d,--dims,-k", dd_args.config.dims_or_k, "Dims or hash count")
      ->default_val(10000);
  dedup->add_option("--shingle-width", dd_args.config.shingle_width, "Words per shingle")
      ->default_val(3);
  dedup->add_option("-K,--hits-k", dd_args.config.k, "K for Hits@K")->default_val(25);
  dedup->add_option("--negatives", dd_args.config.negatives, "Sampled non-duplicate pairs")
      ->default_val(1000);
  dedup->add_option("-s,--seed", dd_args.config.seed, "Seed")->default_val(0);
  dedup->add_flag("--no-timing", dd_args.no_timing,
                  "Write 0 for the timing columns (byte-reproducible output)");
  dedup->add_option("-o,--output", dd_args.output, "CSV path, '-' for stdout")->default_val("-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sketch) return run_sketch(sketch_args);
    if (*compare) return run_compare(compare_args);
    if (*bounds) {
      bounds_args.sweep.workers = workers;
      return run_bounds(bounds_args);
    }
    if (*linkpred) {
      lp_args.config.workers = workers;
      return run_linkpred(lp_args);
    }
    if (*dedup) {
      dd_args.config.workers = workers;
      return run_dedup(dd_args);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
