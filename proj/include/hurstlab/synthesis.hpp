#pragma once

// Exact fractional Gaussian noise. The default route is circulant embedding
// (Davies-Harte / Wood-Chan); Hosking's Durbin-Levinson recursion is the
// O(n^2) fallback when the embedding spectrum is not nonnegative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hurstlab/error.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/signal.hpp"

namespace hurstlab {

/// Autocovariance of unit-variance fGn at integer lag k.
[[nodiscard]] inline double fgn_autocovariance(double hurst, double lag) {
  const double k = std::abs(lag);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

enum class FgnMethod { automatic, circulant, hosking };

namespace detail {

/// Eigenvalues of the minimal power-of-two circulant embedding of the
/// length-n fGn covariance.
[[nodiscard]] inline std::vector<double> circulant_spectrum(double hurst, std::size_t n) {
  std::size_t half = 1;
  while (half < n - 1) half <<= 1;
  const std::size_t size = 2 * half;
  std::vector<std::complex<double>> row(size);
  for (std::size_t k = 0; k < size; ++k) {
    row[k] = fgn_autocovariance(hurst, static_cast<double>(std::min(k, size - k)));
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);
  std::vector<double> lambda(size);
  std::transform(eig.begin(), eig.end(), lambda.begin(), [](auto z) { return z.real(); });
  return lambda;
}

[[nodiscard]] inline bool embedding_is_valid(const std::vector<double>& lambda) {
  const double top = *std::max_element(lambda.begin(), lambda.end());
  return *std::min_element(lambda.begin(), lambda.end()) >= -1e-10 * top;
}

inline std::vector<double> circulant_fgn(const std::vector<double>& lambda, std::size_t n,
                                         Rng& rng) {
  const std::size_t size = lambda.size();
  std::vector<std::complex<double>> w(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double scale = std::sqrt(std::max(lambda[k], 0.0) / static_cast<double>(size));
    const double re = rng.normal();
    const double im = rng.normal();
    w[k] = {scale * re, scale * im};
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> y;
  fft.fwd(y, w);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = y[t].real();
  return out;
}

inline std::vector<double> hosking_fgn(double hurst, std::size_t n, Rng& rng) {
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(hurst, static_cast<double>(k));

  std::vector<double> out(n);
  std::vector<double> phi, prev;
  phi.reserve(n);
  prev.reserve(n);
  double v = gamma[0];
  out[0] = std::sqrt(v) * rng.normal();
  for (std::size_t t = 1; t < n; ++t) {
    double acc = gamma[t];
    for (std::size_t k = 1; k < t; ++k) acc -= prev[k - 1] * gamma[t - k];
    const double reflection = acc / v;
    phi.assign(t, 0.0);
    for (std::size_t k = 1; k < t; ++k) phi[k - 1] = prev[k - 1] - reflection * prev[t - k - 1];
    phi[t - 1] = reflection;
    v *= 1.0 - reflection * reflection;

    double x = 0.0;
    for (std::size_t k = 1; k <= t; ++k) x += phi[k - 1] * out[t - k];
    out[t] = x + std::sqrt(v) * rng.normal();
    std::swap(phi, prev);
  }
  return out;
}

}  // namespace detail

/// Stationary Gaussian noise with the fGn autocovariance scaled by sigma^2.
/// Output is a pure function of spec.
[[nodiscard]] inline Signal generate_fgn(const FgnSpec& spec,
                                         FgnMethod method = FgnMethod::automatic) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<double> samples;
  if (method == FgnMethod::hosking) {
    samples = detail::hosking_fgn(spec.hurst, spec.length, rng);
  } else {
    const auto lambda = detail::circulant_spectrum(spec.hurst, spec.length);
    if (method == FgnMethod::automatic && !detail::embedding_is_valid(lambda)) {
      samples = detail::hosking_fgn(spec.hurst, spec.length, rng);
    } else {
      samples = detail::circulant_fgn(lambda, spec.length, rng);
    }
  }
  for (double& s : samples) s *= spec.sigma;
  return Signal(std::move(samples), spec);
}

/// Running sum of the noise; the implicit B(0) = 0 is not emitted.
[[nodiscard]] inline Signal fgn_to_fbm(const Signal& noise) {
  std::vector<double> path(noise.size());
  std::partial_sum(noise.samples().begin(), noise.samples().end(), path.begin());
  return Signal(std::move(path), noise.origin());
}

[[nodiscard]] inline Signal generate_fbm(const FgnSpec& spec) {
  return fgn_to_fbm(generate_fgn(spec));
}

}  // namespace hurstlab
