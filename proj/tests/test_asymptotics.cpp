#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hurstlab/asymptotics.hpp"
#include "hurstlab/normal.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/stats.hpp"

using namespace hurstlab;
using Catch::Approx;

namespace {

// Variance across replicates of the median of N draws of `draw()`.
template <typename Draw>
double median_variance(std::size_t n, std::size_t reps, std::uint64_t seed, Draw draw) {
  Rng rng(seed);
  std::vector<double> sample(n), medians(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    for (double& v : sample) v = draw(rng);
    medians[r] = stats::median_inplace(sample);
  }
  return stats::variance(medians);
}

}  // namespace

TEST_CASE("normal quantile", "[asymptotics][normal]") {
  CHECK(std::abs(normal_quantile(0.75) - 0.6744897501960817) < 1e-15);
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-14);
  CHECK(std::abs(normal_quantile(0.5)) < 1e-16);
  CHECK(std::abs(normal_quantile(1e-10) + 6.361340902404056) < 1e-12);
  for (double p = 0.0005; p < 1.0; p += 0.0137) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-15);
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isnan(normal_quantile(1.5)));
}

TEST_CASE("constants Q and A", "[asymptotics]") {
  CHECK(constants::kQ == Approx(0.4549364231195727).epsilon(1e-13));
  CHECK(constants::kA == Approx(5.44183721724782).epsilon(1e-12));
  CHECK(std::abs(constants::kA - 5.4418) < 1e-4);
}

TEST_CASE("population medians", "[asymptotics]") {
  CHECK(medl_population_median(0.3, 1.0, 0) == Approx(-0.7875975992017823).epsilon(1e-13));
  CHECK(medl_population_median(0.5, 1.0, 1) ==
        Approx(-2.0 * std::numbers::ln2 - 0.7875975992017823).epsilon(1e-13));
  CHECK(medla_population_median(0.9, 1.0, 0) == Approx(-0.36651292058166435).epsilon(1e-13));
  CHECK(medla_population_median(0.9, 4.0, 0) ==
        Approx(-0.36651292058166435 + std::log(4.0)).epsilon(1e-13));

  for (double h : {0.2, 0.5, 0.8}) {
    const double step = -std::numbers::ln2 * (2.0 * h + 1.0);
    for (int j = -3; j < 12; ++j) {
      CHECK(medl_population_median(h, 2.0, j + 1) - medl_population_median(h, 2.0, j) ==
            Approx(step).epsilon(1e-12));
      CHECK(medla_population_median(h, 2.0, j + 1) - medla_population_median(h, 2.0, j) ==
            Approx(step).epsilon(1e-12));
    }
  }
}

TEST_CASE("population medians match Monte Carlo", "[asymptotics][montecarlo]") {
  constexpr std::size_t draws = 10'000'000;
  Rng rng(99);
  std::vector<double> one(draws), two(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const double z = rng.normal();
    one[i] = std::log(z * z);
    const double a = rng.normal(), b = rng.normal();
    two[i] = std::log((a * a + b * b) / 2.0);
  }
  CHECK(std::abs(stats::median_inplace(one) - medl_population_median(0.5, 1.0, 0)) < 0.002);
  CHECK(std::abs(stats::median_inplace(two) - medla_population_median(0.5, 1.0, 0)) < 0.002);

  // Level 1 at H = 1/2: variance 2^{-2}.
  for (double& v : one) v = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double z = 0.5 * rng.normal();
    one[i] = std::log(z * z);
  }
  CHECK(std::abs(stats::median_inplace(one) - medl_population_median(0.5, 1.0, 1)) < 0.002);
}

TEST_CASE("median variances", "[asymptotics]") {
  CHECK(medl_median_variance(1) == Approx(5.4418).epsilon(1e-4));
  CHECK(medl_median_variance(4096) == Approx(1.3285735393671436e-3).epsilon(1e-12));
  CHECK(medla_median_variance(1) == Approx(2.0814).epsilon(1e-4));
  CHECK(medla_median_variance(4096) == Approx(5.081467238783222e-4).epsilon(1e-12));
  for (std::size_t n : {1u, 10u, 4096u}) {
    CHECK(medl_median_variance(n) / medla_median_variance(n) == Approx(5.44183721724782 / 2.0813689810056077).epsilon(1e-12));
  }
  CHECK_THROWS_AS(medl_median_variance(0), Error);
  CHECK_THROWS_AS(medla_median_variance(0), Error);
}

TEST_CASE("median variances match simulation", "[asymptotics][montecarlo]") {
  constexpr std::size_t n = 4096, reps = 20000;
  const double v1 = median_variance(n, reps, 5, [](Rng& r) {
    const double z = r.normal();
    return std::log(z * z);
  });
  CHECK(v1 == Approx(medl_median_variance(n)).epsilon(0.10));
  const double v2 = median_variance(n, reps, 6, [](Rng& r) {
    const double a = r.normal(), b = r.normal();
    return std::log((a * a + b * b) / 2.0);
  });
  CHECK(v2 == Approx(medla_median_variance(n)).epsilon(0.10));

  // Rescaling shifts the log sample but leaves the median variance alone.
  const double v3 = median_variance(n, reps, 5, [](Rng& r) {
    const double z = 37.0 * r.normal();
    return std::log(z * z);
  });
  CHECK(v3 == Approx(v1).epsilon(1e-6));
}

TEST_CASE("hurst sampling laws", "[asymptotics]") {
  const auto medl = hurst_sampling_law(Method::medl, 2048, 6, 0.7);
  CHECK(std::abs(medl.variance - 7.9007e-5) < 1e-7);
  CHECK(medl.mean == 0.7);
  const auto medla = hurst_sampling_law(Method::medla, 2048, 6);
  const double ln2 = std::numbers::ln2;
  CHECK(medla.variance == Approx(3.0 / (2048.0 * 6 * 35 * std::pow(ln2, 4))).epsilon(1e-14));
  CHECK(medla.variance == Approx(3.021830939657033e-05).epsilon(1e-12));
  CHECK(std::abs(medla.variance - constants::kPublishedSixLevelVariance) > 1e-5);

  for (Method m : {Method::medl, Method::medla}) {
    double prev = hurst_sampling_law(m, 2048, 3).variance;
    for (int levels = 4; levels < 20; ++levels) {
      const double v = hurst_sampling_law(m, 2048, levels).variance;
      CHECK(v < prev);
      prev = v;
    }
    CHECK(hurst_sampling_law(m, 4096, 6).variance < hurst_sampling_law(m, 2048, 6).variance);
    // m^-3 decay.
    CHECK(hurst_sampling_law(m, 100, 200).variance / hurst_sampling_law(m, 100, 400).variance ==
          Approx(8.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(hurst_sampling_law(Method::medl, 2048, 2), Error);
  CHECK_THROWS_AS(hurst_sampling_law(Method::medl, 0, 6), Error);
  CHECK_THROWS_AS(hurst_sampling_law(Method::soltani, 2048, 6), Error);
}

TEST_CASE("normality diagnostics", "[asymptotics]") {
  const auto law = hurst_sampling_law(Method::medl, 2048, 6, 0.5);
  Rng rng(4);
  std::vector<double> draws(300);
  for (double& d : draws) d = law.mean + std::sqrt(law.variance) * rng.normal();
  const auto ok = normality_diagnostics(draws, law);
  CHECK(ok.ks_distance < 0.09);
  CHECK(ok.ks_critical == Approx(0.094).margin(0.001));
  CHECK(ok.consistent_with_law);
  REQUIRE(ok.qq.size() == 300);
  for (std::size_t i = 1; i < ok.qq.size(); ++i) {
    CHECK(ok.qq[i].first > ok.qq[i - 1].first);
    CHECK(ok.qq[i].second >= ok.qq[i - 1].second);
  }
  CHECK(std::abs(ok.moments.skewness) < 0.5);

  const std::vector<double> constant(300, 0.5);
  const auto bad = normality_diagnostics(constant, law);
  CHECK(bad.ks_distance == Approx(0.5).margin(1e-3));
  CHECK_FALSE(bad.consistent_with_law);
  CHECK(bad.moments.variance == 0.0);

  try {
    (void)normality_diagnostics(std::vector<double>(29, 0.5), law);
    FAIL("expected too-few error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::too_few_estimates);
  }
}
