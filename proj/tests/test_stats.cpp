#include <doctest.h>

#include <cmath>

#include "dothash/random.hpp"
#include "dothash/stats.hpp"

using namespace dothash;

TEST_CASE("mean, variance, ci") {
  const std::vector<double> xs = {1, 2, 3, 4};
  CHECK(mean(xs) == 2.5);
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
  // t_{0.975, 3} = 3.182446305284263
  CHECK(ci95_half_width(xs) == doctest::Approx(3.182446305284263 * std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(ci95_half_width(std::vector<double>{1.0}) == 0.0);
  CHECK(ci95_half_width(std::vector<double>{0.3, 0.3, 0.3}) == 0.0);
}

TEST_CASE("average ranks handle ties") {
  const std::vector<double> xs = {10, 20, 10, 30};
  const auto r = average_ranks(xs);
  CHECK(r == std::vector<double>{1.5, 3, 1.5, 4});
}

TEST_CASE("spearman") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  CHECK(spearman(x, std::vector<double>{2, 4, 6, 8, 10}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman(x, std::vector<double>{1, 4, 9, 16, 25}) == doctest::Approx(1.0));

  // Without ties Spearman equals 1 - 6 sum d^2 / (n (n^2 - 1)).
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 5 + rng.below(40);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.unit();
      b[i] = rng.unit();
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double closed = 1.0 - 6.0 * d2 / (double(n) * (double(n) * n - 1));
    CHECK(spearman(a, b) == doctest::Approx(closed).epsilon(1e-9));
  }
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), std::invalid_argument);
}
