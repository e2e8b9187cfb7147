#pragma once

// Monte Carlo study: R fBm paths per Hurst value, one NDWT per path shared by
// every method, per-method mean / variance / bias^2 / MSE.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hurstlab/error.hpp"
#include "hurstlab/estimators.hpp"
#include "hurstlab/method.hpp"
#include "hurstlab/random.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/synthesis.hpp"
#include "hurstlab/transform.hpp"
#include "hurstlab/wavelets.hpp"

namespace hurstlab {

struct ExperimentConfig {
  std::vector<double> hursts{0.3, 0.5, 0.7};
  std::size_t n = 2048;
  std::size_t reps = 300;
  std::string wavelet = "haar";
  int depth = 10;
  std::optional<LevelRange> levels;  // defaults to J-7 .. J-2
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::uint64_t base_seed = 0;
  double sigma = 1.0;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  [[nodiscard]] LevelRange resolved_levels() const {
    return levels.value_or(LevelRange{ceil_log2(n) - 7, ceil_log2(n) - 2});
  }

  void validate() const {
    detail::require(!hursts.empty(), ErrorCategory::invalid_parameter, "no Hurst values");
    for (double h : hursts) {
      detail::require(h > 0.0 && h < 1.0, ErrorCategory::invalid_parameter,
                      "hurst must lie in (0, 1)");
    }
    detail::require(reps >= 2, ErrorCategory::invalid_parameter, "reps must be at least 2");
    detail::require(!methods.empty(), ErrorCategory::invalid_parameter, "no methods selected");
    const bool has_soltani =
        std::find(methods.begin(), methods.end(), Method::soltani) != methods.end();
    detail::require(!has_soltani || is_dyadic(n), ErrorCategory::non_dyadic_length,
                    "soltani needs a dyadic path length");
    detail::require(n >= 2, ErrorCategory::invalid_parameter, "n must be at least 2");
    detail::require(depth >= 1 && depth <= ceil_log2(n), ErrorCategory::depth_exceeds_levels,
                    "depth outside 1..J");
    resolved_levels().validate_for(LevelIndex(n, depth));
    (void)wavelet_by_name(wavelet);
  }
};

/// Seed of the fGn draw for replicate r.
[[nodiscard]] inline std::uint64_t replicate_path_seed(std::uint64_t base, std::size_t r) {
  return derive_seed(base, {static_cast<std::uint64_t>(r), 0});
}

/// Seed of the MEDLA pair resampling for replicate r.
[[nodiscard]] inline std::uint64_t replicate_pair_seed(std::uint64_t base, std::size_t r) {
  return derive_seed(base, {static_cast<std::uint64_t>(r), 1});
}

struct MethodSummary {
  Method method = Method::medl;
  double mean = 0.0;
  double variance = 0.0;
  double bias_squared = 0.0;
  double mse = 0.0;
  std::vector<double> estimates;  // replicate order, failed replicates omitted
};

struct HurstCell {
  double hurst = 0.0;
  std::vector<MethodSummary> methods;
  std::vector<std::size_t> failed_replicates;
  std::vector<std::string> failure_reasons;
};

struct SimulationReport {
  ExperimentConfig config;
  std::vector<HurstCell> cells;
  double wall_seconds = 0.0;

  [[nodiscard]] const MethodSummary* find(double hurst, Method method) const {
    for (const auto& c : cells) {
      if (c.hurst != hurst) continue;
      for (const auto& m : c.methods) {
        if (m.method == method) return &m;
      }
    }
    return nullptr;
  }
};

[[nodiscard]] inline MethodSummary summarize(Method method, double hurst,
                                             std::vector<double> estimates) {
  MethodSummary s;
  s.method = method;
  s.mean = stats::mean(estimates);
  s.variance = stats::variance(estimates);
  s.bias_squared = (s.mean - hurst) * (s.mean - hurst);
  s.mse = s.variance + s.bias_squared;
  s.estimates = std::move(estimates);
  return s;
}

namespace detail {

struct ReplicateOutcome {
  std::vector<double> estimates;  // one per configured method
  std::string error;
};

inline ReplicateOutcome run_replicate(const ExperimentConfig& config, const WaveletFilter& filter,
                                      const LevelRange& range, double hurst, std::size_t r) {
  ReplicateOutcome out;
  try {
    const auto path = generate_fbm({hurst, config.n, config.sigma,
                                    replicate_path_seed(config.base_seed, r)});
    const auto decomp = ndwt(path, filter, config.depth);
    const std::uint64_t pair_seed = replicate_pair_seed(config.base_seed, r);
    for (Method m : config.methods) {
      out.estimates.push_back(estimate_hurst(decomp, m, range, pair_seed).hurst);
    }
  } catch (const Error& e) {
    out.estimates.clear();
    out.error = std::string(category_token(e.category())) + ": " + e.what();
  }
  return out;
}

/// Folds per-replicate outcomes, laid out H-major, into a report. Failed
/// replicates are recorded; more than 1% of them at any H is fatal.
[[nodiscard]] inline SimulationReport reduce_outcomes(const ExperimentConfig& config,
                                                      const std::vector<ReplicateOutcome>& outcomes) {
  const std::size_t per_h = config.reps;
  SimulationReport report;
  report.config = config;
  report.config.levels = config.resolved_levels();
  for (std::size_t h = 0; h < config.hursts.size(); ++h) {
    HurstCell cell;
    cell.hurst = config.hursts[h];
    std::vector<std::vector<double>> per_method(config.methods.size());
    for (std::size_t r = 0; r < per_h; ++r) {
      const auto& o = outcomes[h * per_h + r];
      if (!o.error.empty()) {
        cell.failed_replicates.push_back(r);
        cell.failure_reasons.push_back(o.error);
        continue;
      }
      for (std::size_t m = 0; m < config.methods.size(); ++m) per_method[m].push_back(o.estimates[m]);
    }
    require(static_cast<double>(cell.failed_replicates.size()) <= 0.01 * static_cast<double>(per_h),
            ErrorCategory::too_many_failed_replicates,
            std::to_string(cell.failed_replicates.size()) + " of " + std::to_string(per_h) +
                " replicates failed at H = " + std::to_string(cell.hurst));
    require(per_h - cell.failed_replicates.size() >= 2, ErrorCategory::too_many_failed_replicates,
            "fewer than 2 usable replicates");
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      cell.methods.push_back(summarize(config.methods[m], cell.hurst, std::move(per_method[m])));
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

[[nodiscard]] inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace detail

/// Runs every (H, replicate) work unit, in parallel when threads allow, and
/// reduces in replicate order so the report does not depend on scheduling.
/// Throws too_many_failed_replicates when more than 1% of the replicates of
/// any H fail.
[[nodiscard]] inline SimulationReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const WaveletFilter filter = wavelet_by_name(config.wavelet);
  const LevelRange range = config.resolved_levels();
  const std::size_t per_h = config.reps;
  const std::size_t jobs = config.hursts.size() * per_h;

  std::vector<detail::ReplicateOutcome> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
      outcomes[i] = detail::run_replicate(config, filter, range, config.hursts[i / per_h], i % per_h);
    }
  };
  const unsigned threads = detail::worker_count(config.threads, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SimulationReport report = detail::reduce_outcomes(config, outcomes);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

struct RankedMethod {
  Method method = Method::medl;
  double mse = 0.0;
  double delta_from_best = 0.0;
};

struct MethodRanking {
  double hurst = 0.0;
  std::vector<RankedMethod> order;  // ascending MSE, ties by method name
};

[[nodiscard]] inline std::vector<MethodRanking> compare_methods(const SimulationReport& report) {
  std::vector<MethodRanking> out;
  for (const auto& cell : report.cells) {
    detail::require(cell.methods.size() >= 2, ErrorCategory::single_method_report,
                    "ranking needs at least two methods");
    MethodRanking ranking;
    ranking.hurst = cell.hurst;
    for (const auto& m : cell.methods) ranking.order.push_back({m.method, m.mse, 0.0});
    std::sort(ranking.order.begin(), ranking.order.end(), [](const auto& a, const auto& b) {
      if (a.mse != b.mse) return a.mse < b.mse;
      return method_name(a.method) < method_name(b.method);
    });
    for (auto& r : ranking.order) r.delta_from_best = r.mse - ranking.order.front().mse;
    out.push_back(std::move(ranking));
  }
  return out;
}

}  // namespace hurstlab
