#pragma once

#include <span>

namespace might {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, Acklam's rational approximation polished by one
/// Halley step (absolute error well below 1e-9 on (0, 1)).
double normal_quantile(double probability);

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// the standard normal CDF. Returns 0 for an empty sample.
double ks_statistic_normal(std::span<const double> samples);

}  // namespace might
