#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace hurstlab::stats {

[[nodiscard]] inline double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance (divisor n - 1).
[[nodiscard]] inline double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

/// Median of a scratch buffer, reordering it in place. Even sizes average the
/// two central order statistics.
[[nodiscard]] inline double median_inplace(std::span<double> x) {
  const std::size_t n = x.size();
  const auto mid = x.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(x.begin(), mid, x.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(x.begin(), mid);
  return lower + (upper - lower) / 2.0;
}

[[nodiscard]] inline double median(std::span<const double> x) {
  std::vector<double> scratch(x.begin(), x.end());
  return median_inplace(scratch);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;         // unbiased
  double skewness = 0.0;         // g1, population form
  double excess_kurtosis = 0.0;  // g2, population form
};

/// Sample moments. Skewness and kurtosis are reported as 0 for a sequence
/// with no spread.
[[nodiscard]] inline Moments moments(std::span<const double> x) {
  Moments out;
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return out;
  out.mean = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  out.variance = x.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of y on x for arbitrary abscissae.
[[nodiscard]] inline LineFit ols(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace hurstlab::stats
