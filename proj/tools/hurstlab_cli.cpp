// hurstlab: Hurst exponent estimation from non-decimated wavelet spectra.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hurstlab/hurstlab.hpp"

namespace fs = std::filesystem;
using hurstlab::Error;
using hurstlab::ErrorCategory;
using nlohmann::json;
namespace io = hurstlab::io;

namespace {

struct InputOptions {
  std::string path;
  std::string format = "auto";
  std::optional<std::string> column;
};

struct Context {
  io::RunManifest manifest;
  bool quiet = false;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--in", in.path, "Input signal file")->required();
  cmd->add_option("--format", in.format, "Input format: auto|text|csv|bin");
  cmd->add_option("--column", in.column, "CSV column name or zero-based index");
}

hurstlab::Signal load(const InputOptions& in, Context& ctx) {
  auto signal = io::read_signal(in.path, io::parse_signal_format(in.format), in.column);
  ctx.manifest.inputs.push_back(
      {fs::path(in.path).filename().string(), io::content_digest(io::read_file(in.path))});
  return signal;
}

/// JSON to a file (manifest embedded) or to stdout.
void emit_json(json payload, const std::string& out, Context& ctx) {
  payload["manifest"] = io::to_json(ctx.manifest);
  if (out.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    io::write_json(payload, out);
  }
}

/// Non-JSON outputs get a sibling <out>.manifest.json.
void emit_sidecar(const std::string& out, Context& ctx) {
  io::write_json(io::to_json(ctx.manifest), out + ".manifest.json");
}

std::vector<hurstlab::Method> parse_methods(const std::string& text) {
  if (text == "all") return {hurstlab::kAllMethods.begin(), hurstlab::kAllMethods.end()};
  std::vector<hurstlab::Method> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(hurstlab::parse_method(item));
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto v = io::detail::parse_double(item);
    hurstlab::detail::require(v.has_value(), ErrorCategory::invalid_parameter,
                              "bad number '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

unsigned threads_from_env() {
  const char* env = std::getenv("HURSTLAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const auto v = io::detail::parse_double(env);
  hurstlab::detail::require(v.has_value() && *v >= 0.0, ErrorCategory::invalid_parameter,
                            "HURSTLAB_THREADS must be a nonnegative integer");
  return static_cast<unsigned>(*v);
}

int default_depth(std::size_t n) { return std::min(10, hurstlab::ceil_log2(n)); }

json diagnostics_json(const hurstlab::SimulationReport& report) {
  json out = json::array();
  for (const auto& cell : report.cells) {
    for (const auto& m : cell.methods) {
      if (!hurstlab::uses_natural_log(m.method) || m.estimates.size() < 30) continue;
      const auto law = hurstlab::hurst_sampling_law(m.method, report.config.n,
                                                    report.config.resolved_levels().count(),
                                                    cell.hurst);
      hurstlab::TheoreticalLaw fitted = law;
      fitted.mean = m.mean;
      fitted.variance = m.variance > 0.0 ? m.variance : law.variance;
      out.push_back({{"hurst", cell.hurst},
                     {"method", hurstlab::method_name(m.method)},
                     {"asymptotic_law", io::to_json(law)},
                     {"against_asymptotic_law", io::to_json(hurstlab::normality_diagnostics(m.estimates, law))},
                     {"against_fitted_normal", io::to_json(hurstlab::normality_diagnostics(m.estimates, fitted))}});
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hurst exponent estimation by medians of log wavelet energies"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  ctx.manifest = io::make_manifest(argc, argv);
  app.add_flag("--quiet", ctx.quiet, "Suppress summaries on stdout");
  app.set_version_flag("--version", std::string(io::kVersion));

  // synth
  struct {
    double hurst = 0.5;
    std::size_t n = 2048;
    double sigma = 1.0;
    std::uint64_t seed = 0;
    std::string kind = "fbm";
    std::string out;
    std::string format = "text";
    std::string method = "auto";
  } synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate exact fGn or fBm");
  synth_cmd->add_option("--hurst", synth.hurst)->required();
  synth_cmd->add_option("--n", synth.n)->required();
  synth_cmd->add_option("--sigma", synth.sigma);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--kind", synth.kind)->check(CLI::IsMember({"fgn", "fbm"}));
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--format", synth.format)->check(CLI::IsMember({"text", "bin"}));
  synth_cmd->add_option("--method", synth.method, "auto|circulant|hosking")
      ->check(CLI::IsMember({"auto", "circulant", "hosking"}));

  // transform
  InputOptions transform_in;
  struct {
    std::string wavelet = "haar";
    std::optional<int> depth;
    std::string mode = "ndwt";
    std::string out;
  } transform;
  auto* transform_cmd = app.add_subcommand("transform", "Wavelet decomposition to JSON");
  add_input_options(transform_cmd, transform_in);
  transform_cmd->add_option("--wavelet", transform.wavelet);
  transform_cmd->add_option("--depth", transform.depth);
  transform_cmd->add_option("--mode", transform.mode)->check(CLI::IsMember({"ndwt", "dwt"}));
  transform_cmd->add_option("--out", transform.out);

  // acf
  InputOptions acf_in;
  struct {
    int level = 0;
    std::size_t max_lag = 20;
    std::string wavelet = "haar";
    std::optional<int> depth;
    std::string mode = "ndwt";
    std::string variable = "coefficients";
    std::uint64_t seed = 0;
    std::string out;
  } acf;
  auto* acf_cmd = app.add_subcommand("acf", "Autocorrelation of one decomposition level (CSV lag,acf)");
  add_input_options(acf_cmd, acf_in);
  acf_cmd->add_option("--level", acf.level, "Level j")->required();
  acf_cmd->add_option("--max-lag", acf.max_lag);
  acf_cmd->add_option("--wavelet", acf.wavelet);
  acf_cmd->add_option("--depth", acf.depth);
  acf_cmd->add_option("--mode", acf.mode)->check(CLI::IsMember({"ndwt", "dwt"}));
  acf_cmd->add_option("--variable", acf.variable,
                      "coefficients|traditional|soltani|medl|medla (variables each method aggregates)")
      ->check(CLI::IsMember({"coefficients", "traditional", "soltani", "medl", "medla"}));
  acf_cmd->add_option("--seed", acf.seed, "Pair resampling seed for --variable medla");
  acf_cmd->add_option("--out", acf.out);

  // estimate
  InputOptions estimate_in;
  struct {
    std::string method = "all";
    std::string wavelet = "haar";
    std::optional<int> depth;
    std::string levels = "Jm7:Jm2";
    std::uint64_t seed = 0;
    std::string out;
    std::string spectrum_csv;
  } estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate H from a signal");
  add_input_options(estimate_cmd, estimate_in);
  estimate_cmd->add_option("--method", estimate.method, "medl|medla|soltani|traditional|all");
  estimate_cmd->add_option("--wavelet", estimate.wavelet);
  estimate_cmd->add_option("--depth", estimate.depth);
  estimate_cmd->add_option("--levels", estimate.levels, "lo:hi, absolute or J-relative (Jm7:Jm2)");
  estimate_cmd->add_option("--seed", estimate.seed, "MEDLA pair resampling seed");
  estimate_cmd->add_option("--out", estimate.out);
  estimate_cmd->add_option("--spectrum-csv", estimate.spectrum_csv,
                           "Also write j,y of a single-method estimate");

  // theory
  struct {
    std::string method = "medl";
    std::size_t n = 2048;
    int m = 6;
    double hurst = 0.5;
    double sigma2 = 1.0;
    int level = 0;
    std::string out;
  } theory;
  auto* theory_cmd = app.add_subcommand("theory", "Closed-form medians, variances and laws");
  theory_cmd->add_option("--method", theory.method)->check(CLI::IsMember({"medl", "medla"}));
  theory_cmd->add_option("--n", theory.n, "Coefficients per level (N)");
  theory_cmd->add_option("--m", theory.m, "Number of levels");
  theory_cmd->add_option("--hurst", theory.hurst);
  theory_cmd->add_option("--sigma2", theory.sigma2);
  theory_cmd->add_option("--level", theory.level);
  theory_cmd->add_option("--out", theory.out);

  // simulate
  struct {
    std::string hursts = "0.3,0.5,0.7";
    std::size_t n = 2048;
    std::size_t reps = 300;
    std::string wavelet = "haar";
    int depth = 10;
    std::string levels = "Jm7:Jm2";
    std::string methods = "all";
    std::uint64_t seed = 0;
    std::string out;
    std::string table;
  } simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo comparison of the four methods");
  simulate_cmd->add_option("--hurst", simulate.hursts, "Comma-separated Hurst values");
  simulate_cmd->add_option("--n", simulate.n);
  simulate_cmd->add_option("--reps", simulate.reps);
  simulate_cmd->add_option("--wavelet", simulate.wavelet);
  simulate_cmd->add_option("--depth", simulate.depth);
  simulate_cmd->add_option("--levels", simulate.levels);
  simulate_cmd->add_option("--methods", simulate.methods);
  simulate_cmd->add_option("--seed", simulate.seed);
  simulate_cmd->add_option("--out", simulate.out);
  simulate_cmd->add_option("--table", simulate.table, "CSV in Mean/Variance/Bias-squared/MSE layout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth_cmd) {
      const hurstlab::FgnSpec spec{synth.hurst, synth.n, synth.sigma, synth.seed};
      const auto method = synth.method == "hosking"     ? hurstlab::FgnMethod::hosking
                          : synth.method == "circulant" ? hurstlab::FgnMethod::circulant
                                                        : hurstlab::FgnMethod::automatic;
      auto signal = hurstlab::generate_fgn(spec, method);
      if (synth.kind == "fbm") signal = hurstlab::fgn_to_fbm(signal);
      io::write_signal(signal, synth.out,
                       synth.format == "bin" ? io::SignalFormat::bin : io::SignalFormat::text);
      ctx.manifest.config = {{"hurst", synth.hurst}, {"n", synth.n},       {"sigma", synth.sigma},
                             {"seed", synth.seed},   {"kind", synth.kind}, {"method", synth.method}};
      emit_sidecar(synth.out, ctx);
      if (!ctx.quiet) std::cout << "wrote " << synth.n << " samples\n";
    } else if (*transform_cmd) {
      const auto signal = load(transform_in, ctx);
      const auto filter = hurstlab::wavelet_by_name(transform.wavelet);
      const int depth = transform.depth.value_or(default_depth(signal.size()));
      ctx.manifest.config = {{"wavelet", transform.wavelet}, {"depth", depth}, {"mode", transform.mode}};
      const json payload = transform.mode == "dwt"
                               ? io::decomposition_to_json(hurstlab::dwt(signal, filter, depth), "dwt")
                               : io::decomposition_to_json(hurstlab::ndwt(signal, filter, depth), "ndwt");
      emit_json(payload, transform.out, ctx);
    } else if (*acf_cmd) {
      const auto signal = load(acf_in, ctx);
      const auto filter = hurstlab::wavelet_by_name(acf.wavelet);
      const int depth = acf.depth.value_or(default_depth(signal.size()));
      std::vector<double> values;
      if (acf.mode == "dwt") {
        const auto d = hurstlab::dwt(signal, filter, depth);
        const auto c = d.detail_at_level(acf.level);
        values.assign(c.begin(), c.end());
      } else {
        const auto d = hurstlab::ndwt(signal, filter, depth);
        const auto c = d.detail_at_level(acf.level);
        if (acf.variable == "coefficients") {
          values.assign(c.begin(), c.end());
        } else {
          const auto method = hurstlab::parse_method(acf.variable);
          const auto plan = hurstlab::make_pair_plan(d, acf.level, acf.seed);
          values = hurstlab::level_variables(c, method, &plan);
        }
      }
      const auto r = hurstlab::level_acf(values, acf.max_lag);
      ctx.manifest.config = {{"level", acf.level}, {"max_lag", acf.max_lag}, {"wavelet", acf.wavelet},
                             {"depth", depth},     {"mode", acf.mode},       {"variable", acf.variable},
                             {"seed", acf.seed}};
      if (acf.out.empty()) {
        std::cout << io::acf_csv(r);
      } else {
        io::write_file_atomic(acf.out, io::acf_csv(r));
        emit_sidecar(acf.out, ctx);
      }
    } else if (*estimate_cmd) {
      const auto signal = load(estimate_in, ctx);
      const auto filter = hurstlab::wavelet_by_name(estimate.wavelet);
      const int depth = estimate.depth.value_or(default_depth(signal.size()));
      const auto decomp = hurstlab::ndwt(signal, filter, depth);
      const auto range = io::parse_level_range(estimate.levels, decomp.top_level());
      const auto methods = parse_methods(estimate.method);
      ctx.manifest.config = {{"method", estimate.method}, {"wavelet", estimate.wavelet},
                             {"depth", depth},            {"levels", {range.j_lo, range.j_hi}},
                             {"seed", estimate.seed}};
      json results = json::array();
      std::vector<hurstlab::HurstEstimate> estimates;
      for (auto m : methods) {
        estimates.push_back(hurstlab::estimate_hurst(decomp, m, range, estimate.seed));
        results.push_back(io::to_json(estimates.back()));
        if (!ctx.quiet && !estimate.out.empty()) {
          std::cout << hurstlab::method_name(m) << " H = " << estimates.back().hurst << "\n";
        }
      }
      json payload = results.size() == 1 ? results[0]
                                         : json{{"schema", "hurstlab.estimates/1"}, {"estimates", results}};
      emit_json(std::move(payload), estimate.out, ctx);
      if (!estimate.spectrum_csv.empty()) {
        hurstlab::detail::require(estimates.size() == 1, ErrorCategory::unsupported_format,
                                  "--spectrum-csv needs a single method");
        io::write_file_atomic(estimate.spectrum_csv, io::spectrum_csv(estimates.front()));
      }
    } else if (*theory_cmd) {
      const auto method = hurstlab::parse_method(theory.method);
      const bool medl = method == hurstlab::Method::medl;
      const auto law = hurstlab::hurst_sampling_law(method, theory.n, theory.m, theory.hurst);
      json payload{
          {"schema", "hurstlab.theory/1"},
          {"method", theory.method},
          {"population_median",
           medl ? hurstlab::medl_population_median(theory.hurst, theory.sigma2, theory.level)
                : hurstlab::medla_population_median(theory.hurst, theory.sigma2, theory.level)},
          {"level", theory.level},
          {"median_variance", medl ? hurstlab::medl_median_variance(theory.n)
                                   : hurstlab::medla_median_variance(theory.n)},
          {"hurst_law", io::to_json(law)},
          {"constants", {{"Q", hurstlab::constants::kQ}, {"A", hurstlab::constants::kA}}}};
      if (theory.n == 2048 && theory.m == 6) {
        const double published = hurstlab::constants::kPublishedSixLevelVariance;
        payload["published_variance_check"] = {
            {"published", published},
            {"closed_form", law.variance},
            {"agrees", std::abs(law.variance - published) < 1e-7}};
      }
      ctx.manifest.config = {{"method", theory.method}, {"n", theory.n},
                             {"m", theory.m},           {"hurst", theory.hurst},
                             {"sigma2", theory.sigma2}, {"level", theory.level}};
      emit_json(std::move(payload), theory.out, ctx);
    } else if (*simulate_cmd) {
      hurstlab::ExperimentConfig config;
      config.hursts = parse_list(simulate.hursts);
      config.n = simulate.n;
      config.reps = simulate.reps;
      config.wavelet = simulate.wavelet;
      config.depth = simulate.depth;
      config.levels = io::parse_level_range(simulate.levels, hurstlab::ceil_log2(simulate.n));
      config.methods = parse_methods(simulate.methods);
      config.base_seed = simulate.seed;
      config.threads = threads_from_env();
      const auto report = hurstlab::run_experiment(config);
      ctx.manifest.config = io::to_json(config);
      json payload = io::to_json(report);
      payload["normality"] = diagnostics_json(report);
      if (!simulate.table.empty()) {
        io::write_file_atomic(simulate.table, io::report_table_csv(report));
        emit_sidecar(simulate.table, ctx);
      }
      if (!simulate.out.empty() || simulate.table.empty()) emit_json(std::move(payload), simulate.out, ctx);
      if (!ctx.quiet && !(simulate.out.empty() && simulate.table.empty())) {
        std::cout << io::report_table_csv(report);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << hurstlab::category_token(e.category()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
