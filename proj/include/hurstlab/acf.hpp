#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hurstlab/error.hpp"
#include "hurstlab/stats.hpp"

namespace hurstlab {

/// Sample autocorrelation r[0..max_lag] with the biased (divide by n)
/// autocovariance, so r[0] = 1.
[[nodiscard]] inline std::vector<double> level_acf(std::span<const double> values,
                                                   std::size_t max_lag) {
  const std::size_t n = values.size();
  detail::require(max_lag >= 1, ErrorCategory::invalid_parameter, "max_lag must be positive");
  detail::require(n > max_lag + 1, ErrorCategory::sequence_too_short,
                  "need more than " + std::to_string(max_lag + 1) + " values, got " +
                      std::to_string(n));
  const double m = stats::mean(values);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - m;

  double c0 = 0.0;
  for (double v : centered) c0 += v * v;
  std::vector<double> r(max_lag + 1, 0.0);
  r[0] = 1.0;
  if (c0 == 0.0) return r;
  for (std::size_t h = 1; h <= max_lag; ++h) {
    double c = 0.0;
    for (std::size_t i = 0; i + h < n; ++i) c += centered[i] * centered[i + h];
    r[h] = c / c0;
  }
  return r;
}

}  // namespace hurstlab
