#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dothash {

/// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)).
double normal_cdf(double x);
/// Standard normal quantile: Acklam's rational approximation polished with
/// two Halley steps against normal_cdf. Domain (0, 1).
double normal_ppf(double p);

struct BoundsQuery {
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  std::uint64_t size_int = 0;
  std::uint64_t dims = 1;
  double epsilon = 0.1;
  double prob = 0.05;
};

/// (1/d)(|A||B| + |A n B|^2 - 2|A n B|).
double variance(const BoundsQuery& q);
/// min(1, Var / (eps |A n B|)^2).
double chebyshev_tail(const BoundsQuery& q);
/// 2 (1 - Phi(eps |A n B| / sqrt(Var))).
double clt_tail(const BoundsQuery& q);
/// Smallest d with Var(d) (ppf(1 - p/2) / (eps |A n B|))^2 <= d, i.e.
/// ceil(V1 * (ppf / (eps |A n B|))^2) with V1 = d * Var. Ignores q.dims.
std::uint64_t required_dims(const BoundsQuery& q);

/// Monte-Carlo draws of the DotHash intersection estimate for fixed sets
/// A = {0, .., |A|-1} and B = {|A|-|AnB|, .., |A|-|AnB|+|B|-1}. Trial t uses
/// codebook seed `seed + t`.
std::vector<double> sample_intersection_estimates(std::uint64_t size_a, std::uint64_t size_b,
                                                  std::uint64_t size_int, std::size_t dims,
                                                  std::size_t trials, std::uint64_t seed,
                                                  std::size_t workers = 0);

struct BoundsSweepConfig {
  std::uint64_t size_a = 200;
  std::uint64_t size_b = 200;
  std::uint64_t size_int = 100;
  std::vector<std::size_t> dims = {256, 512, 1024};
  std::vector<double> epsilons;
  std::size_t trials = 0;  // 0 disables the empirical column
  std::uint64_t seed = 0;
  std::size_t workers = 0;
};

struct BoundsRow {
  std::size_t dims;
  double epsilon;
  double chebyshev;
  double clt;
  double empirical;  // NaN when trials == 0
};

/// `steps` evenly spaced values in [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t steps);

/// Rows ordered by dims (as given), then epsilon.
std::vector<BoundsRow> bounds_sweep(const BoundsSweepConfig& config);

}  // namespace dothash
