#include "dothash/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dothash/parallel.hpp"
#include "dothash/sketches.hpp"

namespace dothash {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_ppf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_ppf requires p in (0, 1)");

  // Acklam (2003) rational approximation, relative error < 1.15e-9.
  constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                       -2.759285104469687e+02, 1.383577518672690e+02,
                                       -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                       -1.556989798598866e+02, 6.680131188771972e+01,
                                       -1.328068155288572e+01};
  constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                       -2.400758277161838e+00, -2.549732539343734e+00,
                                       4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                       2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  for (int step = 0; step < 2; ++step) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

namespace {

void validate(const BoundsQuery& q) {
  if (q.size_int > std::min(q.size_a, q.size_b)) {
    throw std::invalid_argument("intersection size exceeds a set size");
  }
  if (q.dims == 0) throw std::invalid_argument("dims must be positive");
}

void validate_tail(const BoundsQuery& q) {
  validate(q);
  if (q.size_int == 0) {
    throw std::invalid_argument("relative error undefined for empty intersection");
  }
  if (!(q.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

double variance_numerator(const BoundsQuery& q) {
  const auto a = static_cast<double>(q.size_a);
  const auto b = static_cast<double>(q.size_b);
  const auto i = static_cast<double>(q.size_int);
  return a * b + i * i - 2.0 * i;
}

}  // namespace

double variance(const BoundsQuery& q) {
  validate(q);
  return variance_numerator(q) / static_cast<double>(q.dims);
}

double chebyshev_tail(const BoundsQuery& q) {
  validate_tail(q);
  const double margin = q.epsilon * static_cast<double>(q.size_int);
  return std::min(1.0, variance(q) / (margin * margin));
}

double clt_tail(const BoundsQuery& q) {
  validate_tail(q);
  const double var = variance(q);
  if (var == 0.0) return 0.0;
  const double z = q.epsilon * static_cast<double>(q.size_int) / std::sqrt(var);
  // 2 (1 - Phi(z)) == erfc(z / sqrt 2), without cancellation in the tail.
  return std::erfc(z / std::numbers::sqrt2);
}

std::uint64_t required_dims(const BoundsQuery& q) {
  BoundsQuery checked = q;
  checked.dims = 1;
  validate_tail(checked);
  if (!(q.prob > 0.0 && q.prob < 1.0)) throw std::invalid_argument("prob must be in (0, 1)");
  const double ratio =
      normal_ppf(1.0 - q.prob / 2.0) / (q.epsilon * static_cast<double>(q.size_int));
  const double d = std::ceil(variance_numerator(q) * ratio * ratio);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(d));
}

std::vector<double> sample_intersection_estimates(std::uint64_t size_a, std::uint64_t size_b,
                                                  std::uint64_t size_int, std::size_t dims,
                                                  std::size_t trials, std::uint64_t seed,
                                                  std::size_t workers) {
  if (size_int > std::min(size_a, size_b)) {
    throw std::invalid_argument("intersection size exceeds a set size");
  }
  std::vector<ElementId> a;
  std::vector<ElementId> b;
  for (std::uint64_t i = 0; i < size_a; ++i) a.emplace_back(i);
  for (std::uint64_t i = 0; i < size_b; ++i) b.emplace_back(size_a - size_int + i);

  std::vector<double> estimates(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const Codebook codebook(seed + t, dims);
    estimates[t] = dothash_intersection(dothash_build(codebook, a), dothash_build(codebook, b));
  });
  return estimates;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> out;
  if (steps == 0) return out;
  if (steps == 1) return {lo};
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return out;
}

std::vector<BoundsRow> bounds_sweep(const BoundsSweepConfig& config) {
  std::vector<BoundsRow> rows;
  for (std::size_t d : config.dims) {
    std::vector<double> estimates;
    if (config.trials > 0) {
      estimates = sample_intersection_estimates(config.size_a, config.size_b, config.size_int, d,
                                                config.trials, config.seed, config.workers);
    }
    const auto mu = static_cast<double>(config.size_int);
    for (double eps : config.epsilons) {
      BoundsQuery q{config.size_a, config.size_b, config.size_int, d, eps, 0.05};
      BoundsRow row{d, eps, chebyshev_tail(q), clt_tail(q),
                    std::numeric_limits<double>::quiet_NaN()};
      if (!estimates.empty()) {
        const auto hits = std::count_if(estimates.begin(), estimates.end(),
                                        [&](double x) { return std::abs(x - mu) >= eps * mu; });
        row.empirical = static_cast<double>(hits) / static_cast<double>(estimates.size());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace dothash
