#pragma once

// Wavelet-spectrum estimators of the Hurst exponent on a non-decimated
// decomposition. Each method reduces a level to one statistic y_j, the
// spectrum (j, y_j) is fitted by ordinary least squares, and the slope is
// mapped to H:
//
//   traditional  y = log2 mean(d^2)                    H = -(slope + 1) / 2
//   soltani      y = mean log2 (d_k^2 + d_{k+n/2}^2)/2  H = -(slope + 1) / 2
//   medl         y = median ln d^2                      H = -slope / (2 ln 2) - 1/2
//   medla        y = median ln (d_a^2 + d_b^2)/2 over
//                resampled pairs with |a - b| >= 2^{J-j}

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hurstlab/asymptotics.hpp"
#include "hurstlab/error.hpp"
#include "hurstlab/method.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/transform.hpp"

namespace hurstlab {

/// Energies below this are treated as exact zeros and left out of log samples.
inline constexpr double kEnergyFloor = 1e-300;
/// Largest fraction of a level that may be left out before the level is rejected.
inline constexpr double kMaxExcludedFraction = 0.10;

struct LevelRange {
  int j_lo = 0;
  int j_hi = 0;

  [[nodiscard]] int count() const noexcept { return j_hi - j_lo + 1; }

  void validate_for(const LevelIndex& index) const {
    detail::require(j_lo < j_hi, ErrorCategory::range_invalid,
                    "level range " + std::to_string(j_lo) + ":" + std::to_string(j_hi) +
                        " is empty or reversed");
    detail::require(count() >= 3, ErrorCategory::range_invalid,
                    "level range needs at least 3 levels");
    detail::require(index.has_level(j_lo) && index.has_level(j_hi), ErrorCategory::range_invalid,
                    "level range " + std::to_string(j_lo) + ":" + std::to_string(j_hi) +
                        " not inside available levels " + std::to_string(index.coarsest_level()) +
                        ".." + std::to_string(index.finest_level()));
  }
};

/// Levels J-7 .. J-2.
[[nodiscard]] inline LevelRange default_level_range(const LevelIndex& index) {
  return {index.top_level() - 7, index.top_level() - 2};
}

enum class StatisticKind { log2_mean_energy, mean_log2_midenergy, median_log_energy, median_log_pairavg };

[[nodiscard]] constexpr std::string_view statistic_name(StatisticKind k) noexcept {
  switch (k) {
    case StatisticKind::log2_mean_energy: return "log2_mean_energy";
    case StatisticKind::mean_log2_midenergy: return "mean_log2_midenergy";
    case StatisticKind::median_log_energy: return "median_log_energy";
    case StatisticKind::median_log_pairavg: return "median_log_pairavg";
  }
  return "?";
}

[[nodiscard]] constexpr StatisticKind statistic_of(Method m) noexcept {
  switch (m) {
    case Method::traditional: return StatisticKind::log2_mean_energy;
    case Method::soltani: return StatisticKind::mean_log2_midenergy;
    case Method::medl: return StatisticKind::median_log_energy;
    case Method::medla: return StatisticKind::median_log_pairavg;
  }
  return StatisticKind::median_log_energy;
}

struct SpectrumPoint {
  int j = 0;
  double y = 0.0;
  std::size_t n_j = 0;
  StatisticKind kind = StatisticKind::median_log_energy;
};

struct HurstEstimate {
  Method method = Method::medl;
  double hurst = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<SpectrumPoint> points;
  std::optional<double> theoretical_variance;
  std::optional<std::uint64_t> seed;
  int top_level = 0;  // J of the decomposition the points came from
};

/// Random pair design for one level: `count` ordered index pairs drawn
/// uniformly with replacement among those at least `min_separation` apart.
struct PairSamplePlan {
  int j = 0;
  std::size_t min_separation = 1;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

/// Plan for level j of a length-n decomposition with top level J:
/// separation 2^{J-j}, n pairs, a per-level stream derived from `seed`.
[[nodiscard]] inline PairSamplePlan make_pair_plan(const LevelIndex& index, int j,
                                                   std::uint64_t seed) {
  const int s = index.scale_of_level(j);
  detail::require(s >= 0 && s < 63, ErrorCategory::range_invalid, "level out of range");
  return {j, std::size_t{1} << s, index.n(),
          derive_seed(seed, {static_cast<std::uint64_t>(static_cast<std::int64_t>(j))})};
}

namespace detail {

inline std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) noexcept { return a > b ? a - b : b - a; }

/// Calls fn(k1, k2) for each planned pair in draw order.
template <typename Fn>
void for_each_pair(const PairSamplePlan& plan, std::size_t n, Fn&& fn) {
  require(plan.min_separation < n, ErrorCategory::no_admissible_pair,
          "no index pair at distance >= " + std::to_string(plan.min_separation) +
              " in a level of length " + std::to_string(n));
  Rng rng(plan.seed);
  for (std::size_t drawn = 0; drawn < plan.count;) {
    const std::uint64_t a = rng.below(n);
    const std::uint64_t b = rng.below(n);
    if (abs_diff(a, b) < plan.min_separation) continue;
    fn(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    ++drawn;
  }
}

/// Keeps finite logs of energies above the floor; rejects levels that lose
/// too much.
class LogSample {
 public:
  explicit LogSample(std::size_t capacity) { values_.reserve(capacity); }

  void add(double energy, double log_scale) {
    ++seen_;
    if (energy < kEnergyFloor) return;
    values_.push_back(std::log(energy) * log_scale);
  }

  std::vector<double>& finish(int level) {
    require(!values_.empty(), ErrorCategory::all_zero_level,
            "level " + std::to_string(level) + " has no nonzero coefficients");
    const auto excluded = static_cast<double>(seen_ - values_.size());
    require(excluded <= kMaxExcludedFraction * static_cast<double>(seen_),
            ErrorCategory::all_zero_level,
            "level " + std::to_string(level) + " has more than 10% zero energies");
    return values_;
  }

 private:
  std::vector<double> values_;
  std::size_t seen_ = 0;
};

}  // namespace detail

/// Pairs the plan would draw, for inspection.
[[nodiscard]] inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(
    const PairSamplePlan& plan, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(plan.count);
  detail::for_each_pair(plan, n, [&](std::size_t a, std::size_t b) { pairs.emplace_back(a, b); });
  return pairs;
}

/// Per-coefficient variables each method aggregates, in index (or draw)
/// order: d^2, log2 mid-energies, ln d^2, ln pair averages.
[[nodiscard]] inline std::vector<double> level_variables(std::span<const double> coeffs,
                                                         Method method,
                                                         const PairSamplePlan* plan = nullptr) {
  std::vector<double> out;
  switch (method) {
    case Method::traditional:
      for (double d : coeffs) out.push_back(d * d);
      break;
    case Method::soltani: {
      const std::size_t half = coeffs.size() / 2;
      for (std::size_t k = 0; k < half; ++k) {
        out.push_back(std::log2((coeffs[k] * coeffs[k] + coeffs[k + half] * coeffs[k + half]) / 2.0));
      }
      break;
    }
    case Method::medl:
      for (double d : coeffs) out.push_back(std::log(d * d));
      break;
    case Method::medla:
      detail::require(plan != nullptr, ErrorCategory::invalid_parameter, "medla needs a pair plan");
      detail::for_each_pair(*plan, coeffs.size(), [&](std::size_t a, std::size_t b) {
        out.push_back(std::log((coeffs[a] * coeffs[a] + coeffs[b] * coeffs[b]) / 2.0));
      });
      break;
  }
  return out;
}

[[nodiscard]] inline SpectrumPoint medl_level_stat(std::span<const double> coeffs, int j = 0) {
  detail::require(!coeffs.empty(), ErrorCategory::sequence_too_short, "empty level");
  detail::LogSample sample(coeffs.size());
  for (double d : coeffs) sample.add(d * d, 1.0);
  auto& logs = sample.finish(j);
  const std::size_t used = logs.size();
  return {j, stats::median_inplace(logs), used, StatisticKind::median_log_energy};
}

[[nodiscard]] inline SpectrumPoint medla_level_stat(std::span<const double> coeffs,
                                                    const PairSamplePlan& plan) {
  detail::require(!coeffs.empty(), ErrorCategory::sequence_too_short, "empty level");
  detail::LogSample sample(plan.count);
  detail::for_each_pair(plan, coeffs.size(), [&](std::size_t a, std::size_t b) {
    sample.add((coeffs[a] * coeffs[a] + coeffs[b] * coeffs[b]) / 2.0, 1.0);
  });
  auto& logs = sample.finish(plan.j);
  const std::size_t used = logs.size();
  return {plan.j, stats::median_inplace(logs), used, StatisticKind::median_log_pairavg};
}

[[nodiscard]] inline SpectrumPoint soltani_level_stat(std::span<const double> coeffs, int j = 0) {
  detail::require(!coeffs.empty(), ErrorCategory::sequence_too_short, "empty level");
  detail::require(coeffs.size() % 2 == 0, ErrorCategory::odd_length_level,
                  "mid-energies need an even level length, got " + std::to_string(coeffs.size()));
  const std::size_t half = coeffs.size() / 2;
  detail::LogSample sample(half);
  for (std::size_t k = 0; k < half; ++k) {
    sample.add((coeffs[k] * coeffs[k] + coeffs[k + half] * coeffs[k + half]) / 2.0,
               1.0 / std::numbers::ln2);
  }
  auto& logs = sample.finish(j);
  return {j, stats::mean(logs), logs.size(), StatisticKind::mean_log2_midenergy};
}

[[nodiscard]] inline SpectrumPoint traditional_level_stat(std::span<const double> coeffs,
                                                          int j = 0) {
  detail::require(!coeffs.empty(), ErrorCategory::sequence_too_short, "empty level");
  double energy = 0.0;
  for (double d : coeffs) energy += d * d;
  energy /= static_cast<double>(coeffs.size());
  detail::require(energy > 0.0, ErrorCategory::all_zero_level,
                  "level " + std::to_string(j) + " has zero energy");
  return {j, std::log2(energy), coeffs.size(), StatisticKind::log2_mean_energy};
}

/// OLS over consecutive levels using the closed form for equally spaced
/// abscissae: slope = 12 / (m (m^2 - 1)) * sum (j - jbar) y_j.
[[nodiscard]] inline stats::LineFit regress_spectrum(std::span<const SpectrumPoint> points) {
  const std::size_t m = points.size();
  detail::require(m >= 3, ErrorCategory::range_invalid,
                  "need at least 3 spectrum points, got " + std::to_string(m));
  for (std::size_t i = 1; i < m; ++i) {
    detail::require(points[i].j == points[i - 1].j + 1, ErrorCategory::non_consecutive_levels,
                    "levels must be consecutive and increasing");
  }
  const double md = static_cast<double>(m);
  const double jbar = points.front().j + (md - 1.0) / 2.0;
  double weighted = 0.0, ysum = 0.0;
  for (const auto& p : points) {
    weighted += (p.j - jbar) * p.y;
    ysum += p.y;
  }
  const double slope = 12.0 / (md * (md * md - 1.0)) * weighted;
  return {slope, ysum / md - slope * jbar};
}

[[nodiscard]] inline double hurst_from_slope(Method method, double slope) noexcept {
  if (uses_natural_log(method)) return -slope / (2.0 * std::numbers::ln2) - 0.5;
  return -(slope + 1.0) / 2.0;
}

[[nodiscard]] inline SpectrumPoint level_statistic(const NdwtDecomposition& decomp, Method method,
                                                   int j, std::optional<std::uint64_t> seed) {
  const auto coeffs = decomp.detail_at_level(j);
  switch (method) {
    case Method::traditional: return traditional_level_stat(coeffs, j);
    case Method::soltani: return soltani_level_stat(coeffs, j);
    case Method::medl: return medl_level_stat(coeffs, j);
    case Method::medla: return medla_level_stat(coeffs, make_pair_plan(decomp, j, *seed));
  }
  return {};
}

/// Spectrum, fit and H for one method over `range`. `seed` drives the MEDLA
/// pair resampling and is required for that method only.
[[nodiscard]] inline HurstEstimate estimate_hurst(const NdwtDecomposition& decomp, Method method,
                                                  const LevelRange& range,
                                                  std::optional<std::uint64_t> seed = std::nullopt) {
  range.validate_for(decomp);
  detail::require(method != Method::medla || seed.has_value(), ErrorCategory::invalid_parameter,
                  "medla requires a seed");

  HurstEstimate est;
  est.method = method;
  est.top_level = decomp.top_level();
  for (int j = range.j_lo; j <= range.j_hi; ++j) {
    est.points.push_back(level_statistic(decomp, method, j, seed));
  }
  const auto fit = regress_spectrum(est.points);
  est.slope = fit.slope;
  est.intercept = fit.intercept;
  est.hurst = hurst_from_slope(method, fit.slope);
  if (uses_natural_log(method)) {
    est.theoretical_variance =
        hurst_sampling_law(method, decomp.n(), range.count(), est.hurst).variance;
  }
  if (method == Method::medla) est.seed = seed;
  return est;
}

}  // namespace hurstlab
