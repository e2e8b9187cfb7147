#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hurstlab/stats.hpp"
#include "hurstlab/synthesis.hpp"

using namespace hurstlab;
using Catch::Approx;

namespace {

// Closed-form fGn autocovariance, written out independently of the library.
double gamma_oracle(double h, int k) {
  auto p = [h](double x) { return std::pow(std::abs(x), 2.0 * h); };
  return 0.5 * (p(k + 1.0) - 2.0 * p(k) + p(k - 1.0));
}

// Uncentered autocovariance (the process mean is known to be zero), pooled
// over several independent paths.
std::vector<double> pooled_autocov(double h, std::size_t len, std::size_t paths, int max_lag,
                                   FgnMethod method = FgnMethod::automatic) {
  std::vector<double> acc(max_lag + 1, 0.0);
  std::vector<double> cnt(max_lag + 1, 0.0);
  for (std::size_t p = 0; p < paths; ++p) {
    const auto x = generate_fgn({h, len, 1.0, 1000 + p}, method).samples();
    for (int k = 0; k <= max_lag; ++k) {
      for (std::size_t i = 0; i + k < len; ++i) acc[k] += x[i] * x[i + k];
      cnt[k] += static_cast<double>(len - k);
    }
  }
  for (int k = 0; k <= max_lag; ++k) acc[k] /= cnt[k];
  return acc;
}

}  // namespace

TEST_CASE("fGn autocovariance closed form", "[synthesis]") {
  CHECK(fgn_autocovariance(0.7, 1) == Approx(0.3195079107728942).epsilon(1e-12));
  CHECK(fgn_autocovariance(0.3, 1) == Approx(-0.242141716744801).epsilon(1e-12));
  CHECK(fgn_autocovariance(0.5, 3) == Approx(0.0).margin(1e-15));
  CHECK(fgn_autocovariance(0.42, 0) == Approx(1.0));
}

TEST_CASE("generate_fgn rejects invalid specs", "[synthesis]") {
  CHECK_THROWS_AS(generate_fgn({0.0, 16, 1.0, 1}), Error);
  CHECK_THROWS_AS(generate_fgn({1.0, 16, 1.0, 1}), Error);
  CHECK_THROWS_AS(generate_fgn({0.5, 1, 1.0, 1}), Error);
  CHECK_THROWS_AS(generate_fgn({0.5, 16, 0.0, 1}), Error);
  try {
    (void)generate_fgn({1.5, 16, 1.0, 1});
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::invalid_parameter);
  }
}

TEST_CASE("generate_fgn is a pure function of the spec", "[synthesis]") {
  const FgnSpec spec{0.7, 1000, 2.0, 42};
  CHECK(generate_fgn(spec).samples() == generate_fgn(spec).samples());
  CHECK(generate_fgn(spec).samples() != generate_fgn({0.7, 1000, 2.0, 43}).samples());
  CHECK(generate_fgn(spec, FgnMethod::hosking).samples() ==
        generate_fgn(spec, FgnMethod::hosking).samples());
}

TEST_CASE("circulant embedding spectrum is nonnegative for fGn", "[synthesis]") {
  for (double h : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    for (std::size_t n : {2u, 3u, 100u, 2048u}) {
      CHECK(detail::embedding_is_valid(detail::circulant_spectrum(h, n)));
    }
  }
}

TEST_CASE("white noise at H = 1/2 has no lag-1 covariance", "[synthesis]") {
  const auto g = pooled_autocov(0.5, 1 << 16, 4, 1);
  CHECK(g[1] == Approx(0.0).margin(0.01));
  CHECK(g[0] == Approx(1.0).margin(0.01));
}

TEST_CASE("fGn autocovariance matches the closed form at lags 0..8", "[synthesis]") {
  for (double h : {0.3, 0.5, 0.7}) {
    const auto g = pooled_autocov(h, 1 << 16, 16, 8);
    for (int k = 0; k <= 8; ++k) {
      INFO("H = " << h << " lag " << k);
      CHECK(std::abs(g[k] - gamma_oracle(h, k)) < 0.01);
    }
  }
}

TEST_CASE("Hosking fallback reproduces the same covariance", "[synthesis]") {
  for (double h : {0.3, 0.7}) {
    const auto g = pooled_autocov(h, 1024, 1024, 8, FgnMethod::hosking);
    for (int k = 0; k <= 8; ++k) {
      INFO("H = " << h << " lag " << k);
      CHECK(std::abs(g[k] - gamma_oracle(h, k)) < 0.01);
    }
  }
}

TEST_CASE("sigma scales the noise", "[synthesis]") {
  const auto a = generate_fgn({0.6, 64, 1.0, 9}).samples();
  const auto b = generate_fgn({0.6, 64, 3.0, 9}).samples();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == Approx(3.0 * a[i]).epsilon(1e-14));
}

TEST_CASE("generated fGn is Gaussian", "[synthesis]") {
  for (double h : {0.3, 0.7}) {
    std::vector<double> pooled;
    for (std::uint64_t p = 0; p < 16; ++p) {
      const auto x = generate_fgn({h, 1 << 16, 1.0, 77 + p}).samples();
      pooled.insert(pooled.end(), x.begin(), x.end());
    }
    const auto m = stats::moments(pooled);
    INFO("H = " << h);
    CHECK(std::abs(m.excess_kurtosis) < 0.05);
  }
}

TEST_CASE("fgn_to_fbm is a running sum", "[synthesis]") {
  const Signal ones({1.0, 1.0, 1.0}, IngestedFrom{"x"});
  CHECK(fgn_to_fbm(ones).samples() == std::vector<double>{1.0, 2.0, 3.0});
  const Signal zeros({0.0, 0.0, 0.0, 0.0}, IngestedFrom{"x"});
  CHECK(fgn_to_fbm(zeros).samples() == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("fBm variance grows like t^{2H}", "[synthesis]") {
  constexpr double h = 0.7;
  constexpr std::size_t n = 1 << 14;
  constexpr int seeds = 200;
  std::vector<int> times;
  for (int t = 1; t <= static_cast<int>(n); t *= 2) times.push_back(t);
  std::vector<double> second_moment(times.size(), 0.0);
  for (int s = 0; s < seeds; ++s) {
    const auto b = generate_fbm({h, n, 1.0, 5000u + s}).samples();
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double v = b[times[i] - 1];
      second_moment[i] += v * v / seeds;
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(times[i])));
    ly.push_back(std::log(second_moment[i]));
  }
  CHECK(std::abs(stats::ols(lx, ly).slope - 2.0 * h) < 0.1);

}

TEST_CASE("fBm second moments are self-similar", "[synthesis]") {
  // Var B(2t) / Var B(t) = 2^{2H}.
  constexpr std::size_t n = 256;
  constexpr int seeds = 2000;
  for (double h : {0.3, 0.7}) {
    std::vector<double> m2(n, 0.0);
    for (int s = 0; s < seeds; ++s) {
      const auto b = generate_fbm({h, n, 1.0, 9000u + s}).samples();
      for (std::size_t t = 0; t < n; ++t) m2[t] += b[t] * b[t] / seeds;
    }
    for (std::size_t t : {1u, 4u, 16u, 64u}) {
      INFO("H = " << h << " t = " << t);
      CHECK(m2[2 * t - 1] / m2[t - 1] == Approx(std::pow(2.0, 2.0 * h)).epsilon(0.10));
    }
  }
}
