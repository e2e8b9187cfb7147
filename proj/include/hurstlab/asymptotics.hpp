#pragma once

// Closed-form behaviour of the median estimators when the coefficients of a
// level are independent N(0, sigma^2 2^{-(2H+1)j}). All logarithms are
// natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hurstlab/error.hpp"
#include "hurstlab/method.hpp"
#include "hurstlab/normal.hpp"
#include "hurstlab/stats.hpp"

namespace hurstlab {

namespace constants {

/// Phi^{-1}(3/4), the upper quartile of N(0, 1).
inline const double kUpperQuartileZ = normal_quantile(0.75);
/// Q = Phi^{-1}(3/4)^2, the median of chi^2_1.
inline const double kQ = kUpperQuartileZ * kUpperQuartileZ;
/// A = pi e^Q / (2Q), N times the variance of a median of ln chi^2_1 draws.
inline const double kA = std::numbers::pi * std::exp(kQ) / (2.0 * kQ);

/// Hurst variance printed alongside the 2048-sample, six-level design.
inline constexpr double kPublishedSixLevelVariance = 7.9007e-5;

}  // namespace constants

[[nodiscard]] inline double medl_population_median(double hurst, double sigma2, int level) {
  return -std::numbers::ln2 * (2.0 * hurst + 1.0) * level + std::log(sigma2) +
         2.0 * std::log(constants::kUpperQuartileZ);
}

[[nodiscard]] inline double medla_population_median(double hurst, double sigma2, int level) {
  return -std::numbers::ln2 * (2.0 * hurst + 1.0) * level + std::log(sigma2) +
         std::log(std::numbers::ln2);
}

[[nodiscard]] inline double medl_median_variance(std::size_t sample_size) {
  detail::require(sample_size >= 1, ErrorCategory::invalid_parameter, "N must be at least 1");
  return constants::kA / static_cast<double>(sample_size);
}

[[nodiscard]] inline double medla_median_variance(std::size_t sample_size) {
  detail::require(sample_size >= 1, ErrorCategory::invalid_parameter, "N must be at least 1");
  return 1.0 / (static_cast<double>(sample_size) * std::numbers::ln2 * std::numbers::ln2);
}

struct TheoreticalLaw {
  Method method = Method::medl;
  double mean = 0.5;
  double variance = 0.0;
  std::size_t sample_size = 0;
  int levels = 0;
};

/// Normal law of the Hurst estimate over m equally spaced levels with N
/// coefficients each.
[[nodiscard]] inline TheoreticalLaw hurst_sampling_law(Method method, std::size_t sample_size,
                                                       int levels, double hurst = 0.5) {
  detail::require(uses_natural_log(method), ErrorCategory::invalid_parameter,
                  "sampling law defined for medl and medla only");
  detail::require(levels >= 3, ErrorCategory::invalid_parameter, "m must be at least 3");
  detail::require(sample_size >= 1, ErrorCategory::invalid_parameter, "N must be at least 1");
  const double m = levels;
  const double ln2sq = std::numbers::ln2 * std::numbers::ln2;
  const double denom = static_cast<double>(sample_size) * m * (m * m - 1.0);
  const double variance = method == Method::medl ? 3.0 * constants::kA / (denom * ln2sq)
                                                 : 3.0 / (denom * ln2sq * ln2sq);
  return {method, hurst, variance, sample_size, levels};
}

struct NormalityReport {
  stats::Moments moments;
  double ks_distance = 0.0;
  /// Asymptotic Kolmogorov-Smirnov critical value at alpha = 0.01.
  double ks_critical = 0.0;
  bool consistent_with_law = false;
  /// (theoretical quantile, empirical order statistic) at p = (i + 1/2) / n.
  std::vector<std::pair<double, double>> qq;
};

[[nodiscard]] inline double ks_distance_normal(std::span<const double> sorted, double mean,
                                               double sd) {
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf((sorted[i] - mean) / sd);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

[[nodiscard]] inline NormalityReport normality_diagnostics(std::span<const double> estimates,
                                                           const TheoreticalLaw& law) {
  detail::require(estimates.size() >= 30, ErrorCategory::too_few_estimates,
                  "need at least 30 estimates, got " + std::to_string(estimates.size()));
  detail::require(law.variance > 0.0, ErrorCategory::invalid_parameter,
                  "law variance must be positive");
  std::vector<double> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(law.variance);
  const auto n = static_cast<double>(sorted.size());

  NormalityReport out;
  out.moments = stats::moments(sorted);
  out.ks_distance = ks_distance_normal(sorted, law.mean, sd);
  out.ks_critical = 1.628 / std::sqrt(n);
  out.consistent_with_law = out.ks_distance < out.ks_critical;
  out.qq.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.qq.emplace_back(law.mean + sd * normal_quantile(p), sorted[i]);
  }
  return out;
}

}  // namespace hurstlab
