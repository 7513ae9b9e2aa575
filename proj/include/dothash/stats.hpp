#pragma once

#include <span>
#include <vector>

namespace dothash {

double mean(std::span<const double> xs);
/// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
/// Half-width of the two-sided 95% Student-t interval for the mean.
double ci95_half_width(std::span<const double> xs);

/// 1-based ranks, ties get the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> xs);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace dothash
