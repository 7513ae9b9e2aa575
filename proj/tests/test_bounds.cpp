#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "dothash/bounds.hpp"

using namespace dothash;

namespace {

BoundsQuery base_query(double eps = 0.3, std::uint64_t d = 1024) {
  return BoundsQuery{200, 200, 100, d, eps, 0.05};
}

struct Moments {
  double mean;
  double variance;
};

// Exact mean/variance of a.b by enumerating every sign assignment of the
// distinct elements of A u B, independent of the codebook.
Moments enumerate_dot_moments(int size_a, int size_b, int size_int, int d) {
  const int distinct = size_a + size_b - size_int;
  const int bits = distinct * d;
  const long configs = 1L << bits;
  double sum = 0.0, sum_sq = 0.0;
  for (long mask = 0; mask < configs; ++mask) {
    auto sign = [&](int element, int coord) {
      return ((mask >> (element * d + coord)) & 1) ? 1.0 : -1.0;
    };
    double dot = 0.0;
    for (int j = 0; j < d; ++j) {
      double sa = 0.0, sb = 0.0;
      // A = [0, size_a), B = [size_a - size_int, distinct)
      for (int x = 0; x < size_a; ++x) sa += sign(x, j);
      for (int x = size_a - size_int; x < distinct; ++x) sb += sign(x, j);
      dot += sa * sb / d;
    }
    sum += dot;
    sum_sq += dot * dot;
  }
  const double m = sum / configs;
  return {m, sum_sq / configs - m * m};
}

}  // namespace

TEST_CASE("variance formula matches exhaustive enumeration") {
  struct Case { int a, b, i, d; };
  for (auto c : {Case{2, 3, 1, 2}, Case{2, 2, 2, 3}, Case{3, 2, 0, 2}, Case{3, 3, 2, 2},
                 Case{1, 1, 1, 5}}) {
    CAPTURE(c.a);
    CAPTURE(c.b);
    CAPTURE(c.i);
    CAPTURE(c.d);
    const auto m = enumerate_dot_moments(c.a, c.b, c.i, c.d);
    BoundsQuery q{std::uint64_t(c.a), std::uint64_t(c.b), std::uint64_t(c.i), std::uint64_t(c.d)};
    CHECK(m.mean == doctest::Approx(c.i).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(variance(q)).epsilon(1e-12));
  }
}

TEST_CASE("variance") {
  CHECK(variance(base_query()) == doctest::Approx(49800.0 / 1024));
  CHECK(variance(base_query()) == doctest::Approx(48.6328125));
  CHECK(variance(BoundsQuery{30, 40, 0, 8}) == doctest::Approx(30.0 * 40 / 8));
  CHECK_THROWS_AS(variance(BoundsQuery{3, 3, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(variance(BoundsQuery{3, 3, 4, 8}), std::invalid_argument);
  for (std::uint64_t a = 0; a <= 30; ++a) {
    for (std::uint64_t b = 0; b <= 30; ++b) {
      for (std::uint64_t i = 0; i <= std::min(a, b); ++i) CHECK(variance({a, b, i, 7}) >= 0.0);
    }
  }
}

TEST_CASE("chebyshev_tail") {
  CHECK(chebyshev_tail(base_query()) == doctest::Approx(48.6328125 / 900.0));
  CHECK(chebyshev_tail(base_query()) == doctest::Approx(0.0540).epsilon(1e-3));
  CHECK(chebyshev_tail(base_query(0.3, 1ULL << 40)) < 1e-9);
  CHECK(chebyshev_tail(base_query(0.001)) == 1.0);
  CHECK_THROWS_WITH_AS(chebyshev_tail(BoundsQuery{5, 5, 0, 8, 0.1}),
                       "relative error undefined for empty intersection", std::invalid_argument);
  CHECK_THROWS_AS(chebyshev_tail(BoundsQuery{5, 5, 2, 8, 0.0}), std::invalid_argument);
}

TEST_CASE("clt_tail") {
  const double var = variance(base_query());
  const double eps = 1.96 * std::sqrt(var) / 100.0;
  CHECK(clt_tail(base_query(eps)) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(clt_tail(base_query(1e6)) == 0.0);
  CHECK_THROWS_AS(clt_tail(BoundsQuery{5, 5, 0, 8, 0.1}), std::invalid_argument);
}

TEST_CASE("chebyshev bounds the CLT approximation over a grid") {
  for (std::uint64_t d : {16, 64, 256, 1024, 4096, 65536}) {
    for (double eps = 0.01; eps < 1.0; eps += 0.01) {
      for (std::uint64_t i : {1, 10, 50, 100, 200}) {
        const BoundsQuery q{200, 200, i, d, eps};
        CHECK(chebyshev_tail(q) >= clt_tail(q));
      }
    }
  }
}

TEST_CASE("tails decrease in d and epsilon") {
  double prev_cheb = 2.0, prev_clt = 2.0;
  for (std::uint64_t d = 16; d <= 65536; d *= 2) {
    const auto q = base_query(0.2, d);
    CHECK(chebyshev_tail(q) <= prev_cheb);
    CHECK(clt_tail(q) <= prev_clt);
    prev_cheb = chebyshev_tail(q);
    prev_clt = clt_tail(q);
  }
  prev_cheb = prev_clt = 2.0;
  for (double eps = 0.01; eps <= 2.0; eps += 0.01) {
    const auto q = base_query(eps, 512);
    CHECK(chebyshev_tail(q) <= prev_cheb);
    CHECK(clt_tail(q) <= prev_clt);
    prev_cheb = chebyshev_tail(q);
    prev_clt = clt_tail(q);
  }
}

TEST_CASE("required_dims") {
  // ceil(49800 * (1.959964 / 30)^2) = ceil(212.6)
  CHECK(required_dims(base_query(0.3)) == 213);
  CHECK(required_dims(BoundsQuery{200, 200, 100, 1, 0.3, 0.999999}) >= 1);
  CHECK(required_dims(BoundsQuery{1, 1, 1, 1, 0.1, 0.05}) == 1);  // zero variance

  for (double eps : {0.05, 0.1, 0.3, 0.7}) {
    for (double p : {0.01, 0.05, 0.2}) {
      BoundsQuery q{200, 200, 100, 1, eps, p};
      q.dims = required_dims(q);
      CHECK(clt_tail(q) <= p * (1 + 1e-9));
      // one fewer dimension must miss the target
      if (q.dims > 1) {
        BoundsQuery fewer = q;
        fewer.dims -= 1;
        CHECK(clt_tail(fewer) > p);
      }
    }
  }

  std::uint64_t prev = UINT64_MAX;
  for (double eps = 0.02; eps < 1.0; eps += 0.02) {
    const auto d = required_dims(BoundsQuery{200, 200, 100, 1, eps, 0.05});
    CHECK(d <= prev);
    prev = d;
  }
  prev = UINT64_MAX;
  for (double p = 0.01; p < 1.0; p += 0.01) {
    const auto d = required_dims(BoundsQuery{200, 200, 100, 1, 0.1, p});
    CHECK(d <= prev);
    prev = d;
  }
  CHECK_THROWS_AS(required_dims(BoundsQuery{200, 200, 100, 1, 0.1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(required_dims(BoundsQuery{200, 200, 0, 1, 0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("normal cdf and quantile") {
  const boost::math::normal reference;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    CHECK(normal_cdf(x) == doctest::Approx(boost::math::cdf(reference, x)).epsilon(1e-12));
    CHECK(std::abs(normal_ppf(normal_cdf(x)) - x) < 1e-6);
  }
  for (double p = 1e-9; p < 1.0; p = p < 0.5 ? p * 1.7 : 1 - (1 - p) / 1.7) {
    CHECK(std::abs(normal_ppf(p) - boost::math::quantile(reference, p)) < 1e-7);
    if (1 - p < 1e-9) break;
  }
  CHECK(normal_ppf(0.975) == doctest::Approx(1.959963984540054));
  CHECK_THROWS_AS(normal_ppf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_ppf(1.0), std::invalid_argument);
}

TEST_CASE("bounds_sweep") {
  BoundsSweepConfig cfg;
  cfg.dims = {64, 128};
  cfg.epsilons = linspace(0.1, 0.5, 5);
  cfg.trials = 200;
  const auto rows = bounds_sweep(cfg);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].dims == 64);
  CHECK(rows[5].dims == 128);
  CHECK(rows[4].epsilon == doctest::Approx(0.5));
  for (const auto& r : rows) {
    CHECK(r.clt == doctest::Approx(clt_tail({200, 200, 100, r.dims, r.epsilon})));
    CHECK(r.empirical >= 0.0);
    CHECK(r.empirical <= 1.0);
  }
  cfg.trials = 0;
  CHECK(std::isnan(bounds_sweep(cfg)[0].empirical));

  cfg.trials = 50;
  cfg.workers = 1;
  const auto one = bounds_sweep(cfg);
  cfg.workers = 3;
  const auto three = bounds_sweep(cfg);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].empirical == three[i].empirical);
}

TEST_CASE("linspace") {
  const auto v = linspace(0.0, 1.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v[1] == 0.25);
  CHECK(v.back() == 1.0);
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
  CHECK(linspace(2.0, 3.0, 0).empty());
}
