#pragma once

// Periodic wavelet transforms. Levels are stored by scale index s (s = 1 is
// the finest) and addressed externally by level j = J - s with
// J = ceil(log2 n), so the finest detail level is J - 1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hurstlab/error.hpp"
#include "hurstlab/signal.hpp"
#include "hurstlab/wavelets.hpp"

namespace hurstlab {

[[nodiscard]] constexpr int ceil_log2(std::size_t n) noexcept {
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

[[nodiscard]] constexpr bool is_dyadic(std::size_t n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

/// Common level bookkeeping for both transforms.
class LevelIndex {
 public:
  LevelIndex() = default;
  LevelIndex(std::size_t n, int depth) : n_(n), depth_(depth), top_(ceil_log2(n)) {}

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] int depth() const noexcept { return depth_; }
  /// J = ceil(log2 n).
  [[nodiscard]] int top_level() const noexcept { return top_; }
  [[nodiscard]] int level_of_scale(int s) const noexcept { return top_ - s; }
  [[nodiscard]] int scale_of_level(int j) const noexcept { return top_ - j; }
  [[nodiscard]] int finest_level() const noexcept { return top_ - 1; }
  [[nodiscard]] int coarsest_level() const noexcept { return top_ - depth_; }
  [[nodiscard]] bool has_level(int j) const noexcept {
    const int s = scale_of_level(j);
    return s >= 1 && s <= depth_;
  }

 protected:
  void check_level(int j) const {
    detail::require(has_level(j), ErrorCategory::range_invalid,
                    "level " + std::to_string(j) + " outside decomposition levels " +
                        std::to_string(coarsest_level()) + ".." + std::to_string(finest_level()));
  }

 private:
  std::size_t n_ = 0;
  int depth_ = 0;
  int top_ = 0;
};

/// Non-decimated decomposition: depth detail sequences and one coarse
/// sequence, each of the input length.
class NdwtDecomposition : public LevelIndex {
 public:
  NdwtDecomposition(std::size_t n, int depth, WaveletFilter filter,
                    std::vector<std::vector<double>> details, std::vector<double> coarse)
      : LevelIndex(n, depth), filter_(std::move(filter)), details_(std::move(details)),
        coarse_(std::move(coarse)) {}

  [[nodiscard]] std::span<const double> detail_at_scale(int s) const {
    return details_.at(static_cast<std::size_t>(s - 1));
  }
  [[nodiscard]] std::span<const double> detail_at_level(int j) const {
    check_level(j);
    return detail_at_scale(scale_of_level(j));
  }
  [[nodiscard]] std::span<const double> coarse() const noexcept { return coarse_; }
  [[nodiscard]] const WaveletFilter& filter() const noexcept { return filter_; }
  [[nodiscard]] std::size_t coefficient_count() const noexcept {
    return n() * static_cast<std::size_t>(depth() + 1);
  }

 private:
  WaveletFilter filter_;
  std::vector<std::vector<double>> details_;
  std::vector<double> coarse_;
};

/// Decimated (orthogonal) decomposition: level at scale s has n / 2^s
/// coefficients.
class DwtDecomposition : public LevelIndex {
 public:
  DwtDecomposition(std::size_t n, int depth, WaveletFilter filter,
                   std::vector<std::vector<double>> details, std::vector<double> coarse)
      : LevelIndex(n, depth), filter_(std::move(filter)), details_(std::move(details)),
        coarse_(std::move(coarse)) {}

  [[nodiscard]] std::span<const double> detail_at_scale(int s) const {
    return details_.at(static_cast<std::size_t>(s - 1));
  }
  [[nodiscard]] std::span<const double> detail_at_level(int j) const {
    check_level(j);
    return detail_at_scale(scale_of_level(j));
  }
  [[nodiscard]] std::span<const double> coarse() const noexcept { return coarse_; }
  [[nodiscard]] const WaveletFilter& filter() const noexcept { return filter_; }

 private:
  WaveletFilter filter_;
  std::vector<std::vector<double>> details_;
  std::vector<double> coarse_;
};

/// A trous transform with periodic boundary. Stage s convolves the previous
/// approximation with filters whose taps sit 2^(s-1) samples apart:
/// d[k] = sum_i high[i] * a[(k + i * 2^(s-1)) mod n].
[[nodiscard]] inline NdwtDecomposition ndwt(std::span<const double> signal,
                                            const WaveletFilter& filter, int depth) {
  const std::size_t n = signal.size();
  const int top = ceil_log2(n);
  detail::require(depth >= 1, ErrorCategory::invalid_parameter, "depth must be at least 1");
  detail::require(depth <= top, ErrorCategory::depth_exceeds_levels,
                  "depth " + std::to_string(depth) + " exceeds J = " + std::to_string(top));
  detail::require(n >= filter.length(), ErrorCategory::signal_shorter_than_filter,
                  "signal of length " + std::to_string(n) + " is shorter than filter " +
                      filter.name);

  std::vector<std::vector<double>> details;
  details.reserve(static_cast<std::size_t>(depth));
  std::vector<double> approx(signal.begin(), signal.end());
  std::vector<double> next(n);
  std::size_t stride = 1;
  for (int s = 1; s <= depth; ++s) {
    std::vector<double> d(n, 0.0);
    const std::size_t step = stride % n;
    for (std::size_t k = 0; k < n; ++k) {
      double lo = 0.0, hi = 0.0;
      std::size_t idx = k;
      for (std::size_t i = 0; i < filter.length(); ++i) {
        lo += filter.low[i] * approx[idx];
        hi += filter.high[i] * approx[idx];
        idx += step;
        if (idx >= n) idx -= n;
      }
      next[k] = lo;
      d[k] = hi;
    }
    details.push_back(std::move(d));
    std::swap(approx, next);
    stride *= 2;
  }
  return {n, depth, filter, std::move(details), std::move(approx)};
}

[[nodiscard]] inline NdwtDecomposition ndwt(const Signal& signal, const WaveletFilter& filter,
                                            int depth) {
  return ndwt(std::span<const double>(signal.samples()), filter, depth);
}

/// Mallat pyramid with periodic boundary and downsampling by two:
/// d[k] = sum_i high[i] * a[(2k + i) mod len].
[[nodiscard]] inline DwtDecomposition dwt(std::span<const double> signal,
                                          const WaveletFilter& filter, int depth) {
  const std::size_t n = signal.size();
  detail::require(depth >= 1, ErrorCategory::invalid_parameter, "depth must be at least 1");
  detail::require(depth < 64 && n % (std::size_t{1} << depth) == 0,
                  ErrorCategory::non_dyadic_length,
                  "length " + std::to_string(n) + " is not a multiple of 2^" +
                      std::to_string(depth));

  std::vector<std::vector<double>> details;
  std::vector<double> approx(signal.begin(), signal.end());
  for (int s = 1; s <= depth; ++s) {
    const std::size_t len = approx.size();
    const std::size_t half = len / 2;
    std::vector<double> lo(half, 0.0), hi(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      for (std::size_t i = 0; i < filter.length(); ++i) {
        const double x = approx[(2 * k + i) % len];
        lo[k] += filter.low[i] * x;
        hi[k] += filter.high[i] * x;
      }
    }
    details.push_back(std::move(hi));
    approx = std::move(lo);
  }
  return {n, depth, filter, std::move(details), std::move(approx)};
}

[[nodiscard]] inline DwtDecomposition dwt(const Signal& signal, const WaveletFilter& filter,
                                          int depth) {
  return dwt(std::span<const double>(signal.samples()), filter, depth);
}

/// y[k] = x[(k + shift) mod n].
[[nodiscard]] inline std::vector<double> circular_shift(std::span<const double> x,
                                                        std::size_t shift) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = x[(k + shift) % n];
  return out;
}

}  // namespace hurstlab
