#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hurstlab/acf.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/synthesis.hpp"
#include "hurstlab/transform.hpp"

using namespace hurstlab;
using Catch::Approx;

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("filter bank is orthonormal", "[transform]") {
  for (const auto& name : wavelet_names()) {
    const auto f = wavelet_by_name(name);
    INFO(name);
    double sl = 0.0, sh = 0.0, sl2 = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < f.length(); ++i) {
      sl += f.low[i];
      sh += f.high[i];
      sl2 += f.low[i] * f.low[i];
      cross += f.low[i] * f.high[i];
    }
    CHECK(std::abs(sl - std::numbers::sqrt2) < 1e-12);
    CHECK(std::abs(sh) < 1e-12);
    CHECK(std::abs(sl2 - 1.0) < 1e-12);
    CHECK(std::abs(cross) < 1e-12);
    CHECK(f.length() == 2 * static_cast<std::size_t>(f.vanishing_moments));
  }
  CHECK_THROWS_AS(wavelet_by_name("sym4"), Error);
}

TEST_CASE("ndwt of a constant has zero details", "[transform]") {
  const std::vector<double> x(8, 5.0);
  const auto d = ndwt(x, haar(), 3);
  for (int s = 1; s <= 3; ++s) {
    for (double c : d.detail_at_scale(s)) CHECK(std::abs(c) < 1e-12);
  }
}

TEST_CASE("ndwt haar depth 1 by hand", "[transform]") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto d = ndwt(x, haar(), 1);
  const double r = 1.0 / std::numbers::sqrt2;
  const std::vector<double> expected{(1 - 2) * r, (2 - 3) * r, (3 - 4) * r, (4 - 1) * r};
  const auto got = d.detail_at_scale(1);
  REQUIRE(got.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(got[k] == Approx(expected[k]).margin(1e-15));
  CHECK(d.top_level() == 2);
  CHECK(d.level_of_scale(1) == 1);
}

TEST_CASE("ndwt level bookkeeping", "[transform]") {
  const auto x = white_noise(100, 3);
  const auto d = ndwt(x, wavelet_by_name("db3"), 5);
  CHECK(d.top_level() == 7);
  CHECK(d.finest_level() == 6);
  CHECK(d.coarsest_level() == 2);
  CHECK(d.coefficient_count() == 600);
  for (int j = 2; j <= 6; ++j) CHECK(d.detail_at_level(j).size() == 100);
  CHECK(d.coarse().size() == 100);
  CHECK_THROWS_AS(d.detail_at_level(7), Error);
  CHECK_THROWS_AS(d.detail_at_level(1), Error);
}

TEST_CASE("ndwt errors", "[transform]") {
  const auto x = white_noise(16, 1);
  try {
    (void)ndwt(x, haar(), 5);
    FAIL("expected depth error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::depth_exceeds_levels);
  }
  try {
    (void)ndwt(std::vector<double>(8, 1.0), wavelet_by_name("db6"), 2);
    FAIL("expected short-signal error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::signal_shorter_than_filter);
  }
  CHECK_THROWS_AS(ndwt(x, haar(), 0), Error);
}

TEST_CASE("ndwt preserves white-noise variance per level", "[transform]") {
  const auto x = white_noise(1 << 12, 11);
  for (const char* name : {"haar", "db4"}) {
    const auto d = ndwt(x, wavelet_by_name(name), 6);
    for (int s = 1; s <= 6; ++s) {
      INFO(name << " s = " << s);
      CHECK(std::abs(stats::variance(d.detail_at_scale(s)) - 1.0) < 0.1);
    }
  }
}

TEST_CASE("ndwt is shift covariant exactly", "[transform]") {
  const auto x = white_noise(256, 5);
  for (const char* name : {"haar", "db2", "db10"}) {
    const auto f = wavelet_by_name(name);
    const auto base = ndwt(x, f, 6);
    for (std::size_t tau : {1u, 7u, 128u}) {
      const auto shifted = ndwt(circular_shift(x, tau), f, 6);
      for (int s = 1; s <= 6; ++s) {
        INFO(name << " tau " << tau << " s " << s);
        CHECK(circular_shift(base.detail_at_scale(s), tau) ==
              std::vector<double>(shifted.detail_at_scale(s).begin(), shifted.detail_at_scale(s).end()));
      }
    }
  }
}

TEST_CASE("ndwt is linear", "[transform]") {
  const auto x = white_noise(512, 6);
  const auto y = white_noise(512, 7);
  const double a = 2.5, b = -0.75;
  std::vector<double> z(512);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
  const auto f = wavelet_by_name("db4");
  const auto dx = ndwt(x, f, 7), dy = ndwt(y, f, 7), dz = ndwt(z, f, 7);
  for (int s = 1; s <= 7; ++s) {
    const auto cx = dx.detail_at_scale(s), cy = dy.detail_at_scale(s), cz = dz.detail_at_scale(s);
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < cz.size(); ++k) {
      scale = std::max(scale, std::abs(cz[k]));
      err = std::max(err, std::abs(cz[k] - (a * cx[k] + b * cy[k])));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("dwt by hand", "[transform]") {
  const auto d = dwt(std::vector<double>{1, 1, 1, 1}, haar(), 2);
  for (int s = 1; s <= 2; ++s) {
    for (double c : d.detail_at_scale(s)) CHECK(std::abs(c) < 1e-15);
  }
  REQUIRE(d.coarse().size() == 1);
  CHECK(d.coarse()[0] == Approx(2.0));

  const auto e = dwt(std::vector<double>{1, 2, 3, 4}, haar(), 1);
  const double r = 1.0 / std::numbers::sqrt2;
  REQUIRE(e.detail_at_scale(1).size() == 2);
  CHECK(e.detail_at_scale(1)[0] == Approx(-r));
  CHECK(e.detail_at_scale(1)[1] == Approx(-r));
}

TEST_CASE("dwt level lengths halve and energy is preserved", "[transform]") {
  for (const char* name : {"haar", "db2", "db7"}) {
    const auto x = white_noise(1024, 21);
    const auto d = dwt(x, wavelet_by_name(name), 5);
    double ex = 0.0, ec = 0.0;
    for (double v : x) ex += v * v;
    for (int s = 1; s <= 5; ++s) {
      CHECK(d.detail_at_scale(s).size() == (1024u >> s));
      for (double c : d.detail_at_scale(s)) ec += c * c;
    }
    for (double c : d.coarse()) ec += c * c;
    INFO(name);
    CHECK(std::abs(ec - ex) <= 1e-9 * ex);
  }
  try {
    (void)dwt(std::vector<double>(12, 1.0), haar(), 3);
    FAIL("expected non-dyadic error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::non_dyadic_length);
  }
}

TEST_CASE("level_acf", "[transform][acf]") {
  const std::vector<double> alt{1, -1, 1, -1, 1, -1, 1, -1};
  const auto r = level_acf(alt, 2);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == Approx(-7.0 / 8.0));
  CHECK(r[2] == Approx(6.0 / 8.0));

  const auto noise = white_noise(1 << 14, 8);
  const auto rn = level_acf(noise, 10);
  for (int h = 1; h <= 10; ++h) CHECK(std::abs(rn[h]) < 0.03);

  try {
    (void)level_acf(alt, 7);
    FAIL("expected too-short error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::sequence_too_short);
  }
}

TEST_CASE("ndwt coefficients are more autocorrelated than dwt", "[transform][acf]") {
  int ordered = 0, ndwt_high = 0, dwt_low = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto b = generate_fbm({0.5, 2048, 1.0, seed});
    const auto nd = ndwt(b, haar(), 10);
    const auto dd = dwt(b, haar(), 10);
    const int j = nd.top_level() - 4;
    const double rn = level_acf(nd.detail_at_level(j), 1)[1];
    const double rd = level_acf(dd.detail_at_level(j), 1)[1];
    ordered += rn > rd;
    ndwt_high += rn > 0.5;
    dwt_low += std::abs(rd) < 0.2;
  }
  CHECK(ordered >= 45);
  CHECK(ndwt_high >= 45);
  CHECK(dwt_low >= 40);
}

TEST_CASE("adjacent-level variance ratio of fBm", "[transform]") {
  // Coefficients whose support wraps past the end of the path are left out.
  for (double h : {0.3, 0.5, 0.7}) {
    std::vector<double> energy(11, 0.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto d = ndwt(generate_fbm({h, 2048, 1.0, 300 + seed}), haar(), 10);
      for (int s = 1; s <= 10; ++s) {
        const auto c = d.detail_at_scale(s);
        const std::size_t keep = c.size() - ((std::size_t{1} << s) - 1);
        double e = 0.0;
        for (std::size_t k = 0; k < keep; ++k) e += c[k] * c[k];
        energy[s] += e / static_cast<double>(keep);
      }
    }
    for (int s = 3; s < 8; ++s) {
      INFO("H = " << h << " s = " << s);
      CHECK(energy[s + 1] / energy[s] == Approx(std::pow(2.0, 2.0 * h + 1.0)).epsilon(0.15));
    }
  }
}
