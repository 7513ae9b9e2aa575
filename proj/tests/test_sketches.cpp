#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dothash/encoding.hpp"
#include "dothash/random.hpp"
#include "dothash/sketches.hpp"
#include "dothash/stats.hpp"

using namespace dothash;

namespace {

std::vector<ElementId> range_ids(std::uint64_t first, std::uint64_t count) {
  std::vector<ElementId> out;
  for (std::uint64_t i = 0; i < count; ++i) out.emplace_back(first + i);
  return out;
}

}  // namespace

TEST_CASE("dothash_build basics") {
  const Codebook cb(1, 256);
  const auto empty = dothash_build(cb, std::vector<ElementId>{});
  CHECK(empty.cardinality() == 0);
  CHECK(empty.values().isZero(0.0));

  const auto single = dothash_build(cb, std::vector<ElementId>{ElementId{5}});
  CHECK(single.values() == cb.vector_of(ElementId{5}));
  CHECK(single.cardinality() == 1);

  const auto dup = dothash_build(cb, std::vector<ElementId>{ElementId{5}, ElementId{5}});
  CHECK(dup == single);
}

TEST_CASE("dothash_build accepts arbitrary ranges of ids") {
  const Codebook cb(1, 64);
  const auto from_ints = dothash_build(cb, std::vector<std::uint64_t>{1, 2, 3});
  const auto from_ids = dothash_build(cb, range_ids(1, 3));
  CHECK(from_ints == from_ids);
  const auto from_view = dothash_build(cb, std::views::iota(std::uint64_t{1}, std::uint64_t{4}));
  CHECK(from_view == from_ids);
}

TEST_CASE("float sketches track double sketches") {
  const Codebook cb(8, 512);
  const auto a = range_ids(0, 50);
  const auto d = dothash_build<double>(cb, a);
  const auto f = dothash_build<float>(cb, a);
  CHECK((d.values().cast<float>() - f.values()).cwiseAbs().maxCoeff() < 1e-5f);
  CHECK(dothash_intersection(f, f) == doctest::Approx(dothash_intersection(d, d)).epsilon(1e-5));
}

TEST_CASE("weights scale the contribution by sqrt(w)") {
  const Codebook cb(2, 128);
  const auto w = WeightFn::table(WeightKind::custom, {{ElementId{1}, 4.0}, {ElementId{2}, 0.0}});
  const auto s = dothash_build(cb, range_ids(1, 2), w);
  CHECK(s.weighted());
  CHECK(s.cardinality() == 2);
  const Eigen::VectorXd expected = 2.0 * cb.vector_of(ElementId{1});
  CHECK(s.values().isApprox(expected));
}

TEST_CASE("weight errors") {
  CHECK_THROWS_WITH_AS(WeightFn::table(WeightKind::custom, {{ElementId{1}, -1.0}}),
                       "weight function must be nonnegative", DataError);
  const Codebook cb(2, 64);
  const auto negative =
      WeightFn::function(WeightKind::custom, [](ElementId) { return std::optional(-0.5); });
  CHECK_THROWS_WITH_AS(dothash_build(cb, range_ids(0, 3), negative),
                       "weight function must be nonnegative", DataError);
  const auto partial = WeightFn::table(WeightKind::custom, {{ElementId{0}, 1.0}});
  CHECK_THROWS_WITH_AS(dothash_build(cb, range_ids(0, 3), partial),
                       "weight not defined for element", DataError);
}

TEST_CASE("squared norm of a sketch has expectation |A|") {
  constexpr int seeds = 1000;
  const auto a = range_ids(1000, 200);
  std::vector<double> norms;
  for (int s = 0; s < seeds; ++s) {
    norms.push_back(dothash_build(Codebook(s, 1024), a).values().squaredNorm());
  }
  const double se = std::sqrt(sample_variance(norms) / seeds);
  CHECK(std::abs(mean(norms) - 200.0) <= 3 * se);
}

TEST_CASE("dothash_intersection") {
  const Codebook cb(4, 512);
  const auto a = dothash_build(cb, range_ids(0, 20));
  const auto empty = dothash_build(cb, std::vector<ElementId>{});
  CHECK(dothash_intersection(a, empty) == 0.0);
  CHECK(dothash_intersection(a, a) == dothash_intersection(a, a));

  SUBCASE("identical sets are unbiased for |A|") {
    const auto set = range_ids(0, 100);
    std::vector<double> est;
    for (int s = 0; s < 1000; ++s) {
      const auto sk = dothash_build(Codebook(s, 1024), set);
      est.push_back(dothash_intersection(sk, sk));
    }
    const double se = std::sqrt(sample_variance(est) / est.size());
    CHECK(std::abs(mean(est) - 100.0) <= 3 * se);
  }
}

TEST_CASE("incompatible sketches are rejected") {
  const auto a = dothash_build(Codebook(1, 64), range_ids(0, 5));
  const auto other_seed = dothash_build(Codebook(2, 64), range_ids(0, 5));
  const auto other_dims = dothash_build(Codebook(1, 128), range_ids(0, 5));
  CHECK_THROWS_AS(dothash_intersection(a, other_seed), DataError);
  CHECK_THROWS_AS(dothash_intersection(a, other_dims), DataError);
  CHECK_THROWS_AS(dothash_jaccard(a, other_dims), DataError);
  try {
    dothash_intersection(a, other_dims);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("dims") != std::string::npos);
  }

  const MinwiseFamily f1(1, 16), f2(1, 32), f3(2, 16);
  const auto m1 = minhash_build(f1, range_ids(0, 5));
  CHECK_THROWS_AS(minhash_jaccard(m1, minhash_build(f2, range_ids(0, 5))), DataError);
  CHECK_THROWS_AS(minhash_jaccard(m1, minhash_build(f3, range_ids(0, 5))), DataError);

  const auto s1 = simhash_build(Codebook(1, 64), range_ids(0, 5));
  CHECK_THROWS_AS(simhash_similarity(s1, simhash_build(Codebook(1, 65), range_ids(0, 5))),
                  DataError);
  CHECK_THROWS_AS(simhash_similarity(s1, simhash_build(Codebook(3, 64), range_ids(0, 5))),
                  DataError);
}

TEST_CASE("dothash_jaccard") {
  SUBCASE("identical sets approach 1") {
    const auto set = range_ids(0, 100);
    double total = 0.0;
    for (int s = 0; s < 100; ++s) {
      const auto sk = dothash_build(Codebook(s, 4096), set);
      total += dothash_jaccard(sk, sk);
    }
    CHECK(std::abs(total / 100 - 1.0) <= 0.05);
  }
  SUBCASE("clamped to [0, 1]") {
    for (int s = 0; s < 50; ++s) {
      const Codebook cb(s, 16);
      const auto a = dothash_build(cb, range_ids(0, 10));
      const auto b = dothash_build(cb, range_ids(10, 10));
      const auto c = dothash_build(cb, range_ids(0, 10));
      const double disjoint = dothash_jaccard(a, b);
      const double same = dothash_jaccard(a, c);
      CHECK(disjoint >= 0.0);
      CHECK(disjoint <= 1.0);
      CHECK(same >= 0.0);
      CHECK(same <= 1.0);
    }
  }
  SUBCASE("errors") {
    const Codebook cb(0, 32);
    const auto empty = dothash_build(cb, std::vector<ElementId>{});
    CHECK_THROWS_WITH_AS(dothash_jaccard(empty, empty), "Jaccard undefined for two empty sets",
                         DataError);
    const auto weighted = dothash_build(
        cb, range_ids(0, 2), WeightFn::function(WeightKind::custom, [](ElementId) {
          return std::optional(2.0);
        }));
    CHECK_THROWS_AS(dothash_jaccard(weighted, weighted), DataError);
  }
}

TEST_CASE("disjoint union sums sketches exactly") {
  // 1/sqrt(d) is a power of two for d = 4^n, so every partial sum is exact.
  Rng rng(77);
  for (std::size_t d : {256, 1024, 4096}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Codebook cb(rng.next(), d);
      std::vector<ElementId> a, b, both;
      for (std::uint64_t i = 0; i < 60; ++i) {
        const ElementId e{rng.next()};
        (rng.bernoulli(0.5) ? a : b).push_back(e);
        both.push_back(e);
      }
      const auto sa = dothash_build(cb, a);
      const auto sb = dothash_build(cb, b);
      const auto su = dothash_build(cb, both);
      CHECK(su.values() == (sa.values() + sb.values()).eval());
      CHECK(su.cardinality() == sa.cardinality() + sb.cardinality());
    }
  }
}

TEST_CASE("minhash_build") {
  const MinwiseFamily f(3, 64);
  const auto empty = minhash_build(f, {});
  CHECK(empty.cardinality == 0);
  for (auto m : empty.minima) CHECK(m == MinHashSketch::kEmpty);

  const std::vector<ElementId> one = {ElementId{42}};
  const auto single = minhash_build(f, one);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(single.minima[i] == f.value(i, ElementId{42}));

  SUBCASE("union-min identity") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
      std::vector<ElementId> a, b;
      for (int i = 0; i < 30; ++i) a.emplace_back(rng.below(200));
      for (int i = 0; i < 30; ++i) b.emplace_back(rng.below(200));
      std::vector<ElementId> u = a;
      u.insert(u.end(), b.begin(), b.end());
      const auto sa = minhash_build(f, a);
      const auto sb = minhash_build(f, b);
      const auto su = minhash_build(f, u);
      for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(su.minima[i] == std::min(sa.minima[i], sb.minima[i]));
      }
    }
  }
}

TEST_CASE("minhash_jaccard") {
  const MinwiseFamily f(9, 128);
  const auto a = minhash_build(f, range_ids(0, 100));
  CHECK(minhash_jaccard(a, a) == 1.0);
  const auto b = minhash_build(f, range_ids(1000, 100));
  CHECK(minhash_jaccard(a, b) <= 3.0 / 128);
  const auto empty = minhash_build(f, {});
  CHECK_THROWS_AS(minhash_jaccard(empty, empty), DataError);
  CHECK(minhash_jaccard(a, empty) == 0.0);

  SUBCASE("J = 0.5 over 1000 seeds") {
    // |A| = |B| = 150, |A n B| = 100, |A u B| = 200.
    const auto sa = range_ids(0, 150);
    const auto sb = range_ids(50, 150);
    double total = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const MinwiseFamily fam(s, 128);
      total += minhash_jaccard(minhash_build(fam, sa), minhash_build(fam, sb));
    }
    CHECK(std::abs(total / 1000 - 0.5) <= 3 * std::sqrt(0.25 / 128));
  }
}

TEST_CASE("simhash_build") {
  const Codebook cb(6, 200);
  const std::vector<ElementId> one = {ElementId{8}};
  const auto single = simhash_build(cb, one);
  const auto v = cb.vector_of(ElementId{8});
  for (std::size_t j = 0; j < 200; ++j) CHECK(single.bit(j) == (v[Eigen::Index(j)] > 0));

  const auto empty = simhash_build(cb, {});
  for (auto w : empty.words) CHECK(w == 0);

  // Two elements: coordinates where they disagree sum to zero -> bit 0.
  const std::vector<ElementId> two = {ElementId{8}, ElementId{9}};
  const auto pair = simhash_build(cb, two);
  const auto w = cb.vector_of(ElementId{9});
  for (std::size_t j = 0; j < 200; ++j) {
    CHECK(pair.bit(j) == (v[Eigen::Index(j)] + w[Eigen::Index(j)] > 0));
  }

  const auto set = range_ids(0, 31);
  CHECK(simhash_build(cb, set) == simhash_build(cb, set));
}

TEST_CASE("simhash_similarity") {
  const Codebook cb(6, 128);
  const auto a = simhash_build(cb, range_ids(0, 31));
  CHECK(simhash_similarity(a, a) == 1.0);

  SimHashSketch complement = a;
  for (auto& word : complement.words) word = ~word;
  CHECK(simhash_similarity(a, complement) == 0.0);

  std::vector<double> scores;
  for (int s = 0; s < 100; ++s) {
    const Codebook c(s, 1024);
    scores.push_back(
        simhash_similarity(simhash_build(c, range_ids(0, 51)), simhash_build(c, range_ids(100, 51))));
  }
  CHECK(std::abs(mean(scores) - 0.5) <= 0.05);
  const auto within = std::count_if(scores.begin(), scores.end(),
                                    [](double x) { return std::abs(x - 0.5) <= 0.05; });
  CHECK(within >= 95);
}
