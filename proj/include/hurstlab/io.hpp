#pragma once

// Signal ingestion and result persistence. JSON payloads carry a schema tag
// and the scale-index / level mapping; nothing written here embeds an
// absolute path.

#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hurstlab/asymptotics.hpp"
#include "hurstlab/error.hpp"
#include "hurstlab/estimators.hpp"
#include "hurstlab/signal.hpp"
#include "hurstlab/simulation.hpp"
#include "hurstlab/transform.hpp"

namespace hurstlab::io {

using nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kLevelRule = "j = J - s; s = 1 is the finest detail; J = ceil(log2 n)";

enum class SignalFormat { automatic, text, csv, bin };

[[nodiscard]] inline SignalFormat parse_signal_format(std::string_view s) {
  if (s == "auto") return SignalFormat::automatic;
  if (s == "text" || s == "txt") return SignalFormat::text;
  if (s == "csv") return SignalFormat::csv;
  if (s == "bin") return SignalFormat::bin;
  throw Error(ErrorCategory::invalid_parameter, "unknown signal format '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Raw file access

[[nodiscard]] inline std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  detail::require(std::filesystem::is_regular_file(path, ec), ErrorCategory::not_found,
                  "no such file: " + path.filename().string());
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), ErrorCategory::io_error,
                  "cannot open " + path.filename().string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temporary and renames it over the target.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  detail::require(std::filesystem::is_directory(parent, ec), ErrorCategory::io_error,
                  "output directory does not exist for " + path.filename().string());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    detail::require(static_cast<bool>(out), ErrorCategory::io_error,
                    "cannot write " + path.filename().string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    detail::require(static_cast<bool>(out), ErrorCategory::io_error,
                    "short write to " + path.filename().string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCategory::io_error, "cannot rename into " + path.filename().string());
  }
}

/// 64-bit FNV-1a of a byte string.
[[nodiscard]] constexpr std::uint64_t content_digest(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

[[nodiscard]] inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Signal ingestion

namespace detail {

[[nodiscard]] inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[nodiscard]] inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  // from_chars reports out-of-range for subnormals; keep its value anyway.
  if (ptr != s.data() + s.size()) return std::nullopt;
  if (ec != std::errc{} && ec != std::errc::result_out_of_range) return std::nullopt;
  return v;
}

[[nodiscard]] inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

[[nodiscard]] inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double checked_sample(std::optional<double> v, std::size_t row) {
  hurstlab::detail::require(v.has_value(), ErrorCategory::parse_error,
                            "row " + std::to_string(row) + ": not a number");
  hurstlab::detail::require(std::isfinite(*v), ErrorCategory::non_finite_sample,
                            "row " + std::to_string(row) + ": non-finite sample");
  return *v;
}

[[nodiscard]] inline std::vector<double> parse_text(std::string_view text) {
  std::vector<double> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(checked_sample(parse_double(line), i + 1));
  }
  return out;
}

/// CSV column selection: `column` may be a header name or a zero-based index;
/// without it the first column holding a number in the first data row wins.
[[nodiscard]] inline std::vector<double> parse_csv(std::string_view text,
                                                   const std::optional<std::string>& column) {
  const auto lines = split_lines(text);
  std::size_t row = 0;
  while (row < lines.size() && trim(lines[row]).empty()) ++row;
  hurstlab::detail::require(row < lines.size(), ErrorCategory::empty_file, "csv has no rows");

  auto first = split_fields(lines[row]);
  bool header = false;
  for (auto f : first) header = header || (!parse_double(f).has_value());

  std::optional<std::size_t> index;
  if (column) {
    if (header) {
      for (std::size_t c = 0; c < first.size(); ++c) {
        if (first[c] == *column) index = c;
      }
    }
    if (!index) {
      std::size_t c = 0;
      const auto [ptr, ec] = std::from_chars(column->data(), column->data() + column->size(), c);
      hurstlab::detail::require(ec == std::errc{} && ptr == column->data() + column->size(),
                                ErrorCategory::invalid_parameter,
                                "csv column '" + *column + "' not found");
      index = c;
    }
  }
  const std::size_t data_start = header ? row + 1 : row;
  if (!index) {
    std::size_t probe = data_start;
    while (probe < lines.size() && trim(lines[probe]).empty()) ++probe;
    hurstlab::detail::require(probe < lines.size(), ErrorCategory::empty_file, "csv has no data rows");
    const auto fields = split_fields(lines[probe]);
    for (std::size_t c = 0; c < fields.size() && !index; ++c) {
      if (parse_double(fields[c])) index = c;
    }
    hurstlab::detail::require(index.has_value(), ErrorCategory::parse_error,
                              "row " + std::to_string(probe + 1) + ": no numeric column");
  }

  std::vector<double> out;
  for (std::size_t i = data_start; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_fields(lines[i]);
    hurstlab::detail::require(*index < fields.size(), ErrorCategory::parse_error,
                              "row " + std::to_string(i + 1) + ": missing column");
    out.push_back(checked_sample(parse_double(fields[*index]), i + 1));
  }
  return out;
}

[[nodiscard]] inline std::vector<double> parse_bin(std::string_view bytes) {
  hurstlab::detail::require(bytes.size() % 8 == 0, ErrorCategory::parse_error,
                            "binary size " + std::to_string(bytes.size()) +
                                " is not a multiple of 8");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) {
      word = (word << 8) | static_cast<unsigned char>(bytes[i * 8 + static_cast<std::size_t>(b)]);
    }
    out[i] = std::bit_cast<double>(word);
    hurstlab::detail::require(std::isfinite(out[i]), ErrorCategory::non_finite_sample,
                              "row " + std::to_string(i + 1) + ": non-finite sample");
  }
  return out;
}

}  // namespace detail

[[nodiscard]] inline SignalFormat detect_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".bin" || ext == ".f64") return SignalFormat::bin;
  if (ext == ".csv") return SignalFormat::csv;
  return SignalFormat::text;
}

/// Loads a signal. text: one decimal per line (blank and '#' lines skipped);
/// csv: one column, see parse_csv; bin: little-endian IEEE-754 doubles.
[[nodiscard]] inline Signal read_signal(const std::filesystem::path& path,
                                        SignalFormat format = SignalFormat::automatic,
                                        const std::optional<std::string>& column = std::nullopt) {
  const std::string bytes = read_file(path);
  hurstlab::detail::require(!bytes.empty(), ErrorCategory::empty_file,
                            path.filename().string() + " is empty");
  if (format == SignalFormat::automatic) format = detect_format(path);
  std::vector<double> samples;
  switch (format) {
    case SignalFormat::bin: samples = detail::parse_bin(bytes); break;
    case SignalFormat::csv: samples = detail::parse_csv(bytes, column); break;
    default: samples = detail::parse_text(bytes); break;
  }
  hurstlab::detail::require(!samples.empty(), ErrorCategory::empty_file,
                            path.filename().string() + " holds no samples");
  return Signal(std::move(samples), IngestedFrom{path.filename().string()});
}

[[nodiscard]] inline std::string encode_text(std::span<const double> samples) {
  std::string out;
  char buf[32];
  for (double v : samples) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
    out.push_back('\n');
  }
  return out;
}

[[nodiscard]] inline std::string encode_bin(std::span<const double> samples) {
  std::string out(samples.size() * 8, '\0');
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto word = std::bit_cast<std::uint64_t>(samples[i]);
    for (std::size_t b = 0; b < 8; ++b) {
      out[i * 8 + b] = static_cast<char>(word & 0xff);
      word >>= 8;
    }
  }
  return out;
}

inline void write_signal(const Signal& signal, const std::filesystem::path& path,
                         SignalFormat format) {
  if (format == SignalFormat::automatic) format = detect_format(path);
  hurstlab::detail::require(format != SignalFormat::csv, ErrorCategory::unsupported_format,
                            "signals are written as text or bin");
  write_file_atomic(path, format == SignalFormat::bin ? encode_bin(signal.samples())
                                                      : encode_text(signal.samples()));
}

// ---------------------------------------------------------------------------
// Level ranges

/// Parses "lo:hi" where each end is an absolute level ("4") or relative to
/// J ("Jm7" or "J-7", "J" alone meaning J).
[[nodiscard]] inline LevelRange parse_level_range(std::string_view text, int top_level) {
  const auto colon = text.find(':');
  hurstlab::detail::require(colon != std::string_view::npos, ErrorCategory::invalid_parameter,
                            "level range must look like lo:hi");
  auto parse_end = [&](std::string_view s) {
    s = detail::trim(s);
    int base = 0;
    int sign = 1;
    if (!s.empty() && (s.front() == 'J' || s.front() == 'j')) {
      base = top_level;
      s.remove_prefix(1);
      if (s.empty()) return base;
      hurstlab::detail::require(s.front() == 'm' || s.front() == '-' || s.front() == '+' ||
                                    s.front() == 'p',
                                ErrorCategory::invalid_parameter,
                                "bad relative level in '" + std::string(text) + "'");
      sign = (s.front() == 'm' || s.front() == '-') ? -1 : 1;
      s.remove_prefix(1);
    }
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    hurstlab::detail::require(ec == std::errc{} && ptr == s.data() + s.size() && !s.empty(),
                              ErrorCategory::invalid_parameter,
                              "bad level in '" + std::string(text) + "'");
    return base + sign * v;
  };
  return {parse_end(text.substr(0, colon)), parse_end(text.substr(colon + 1))};
}

// ---------------------------------------------------------------------------
// JSON payloads

[[nodiscard]] inline json level_convention(int top_level) {
  return {{"J", top_level}, {"rule", kLevelRule}};
}

[[nodiscard]] inline json to_json(const SpectrumPoint& p, int top_level) {
  return {{"j", p.j},
          {"scale_index", top_level - p.j},
          {"y", p.y},
          {"n_j", p.n_j},
          {"statistic", statistic_name(p.kind)}};
}

[[nodiscard]] inline json to_json(const HurstEstimate& e) {
  json points = json::array();
  for (const auto& p : e.points) points.push_back(to_json(p, e.top_level));
  return {{"schema", "hurstlab.estimate/1"},
          {"method", method_name(e.method)},
          {"hurst", e.hurst},
          {"slope", e.slope},
          {"intercept", e.intercept},
          {"theoretical_variance", e.theoretical_variance ? json(*e.theoretical_variance) : json()},
          {"seed", e.seed ? json(*e.seed) : json()},
          {"level_convention", level_convention(e.top_level)},
          {"points", std::move(points)}};
}

[[nodiscard]] inline StatisticKind parse_statistic(std::string_view s) {
  for (Method m : kAllMethods) {
    if (statistic_name(statistic_of(m)) == s) return statistic_of(m);
  }
  throw Error(ErrorCategory::parse_error, "unknown statistic '" + std::string(s) + "'");
}

[[nodiscard]] inline HurstEstimate estimate_from_json(const json& j) {
  try {
    HurstEstimate e;
    e.method = parse_method(j.at("method").get<std::string>());
    e.hurst = j.at("hurst").get<double>();
    e.slope = j.at("slope").get<double>();
    e.intercept = j.at("intercept").get<double>();
    if (!j.at("theoretical_variance").is_null()) e.theoretical_variance = j["theoretical_variance"].get<double>();
    if (!j.at("seed").is_null()) e.seed = j["seed"].get<std::uint64_t>();
    e.top_level = j.at("level_convention").at("J").get<int>();
    for (const auto& p : j.at("points")) {
      e.points.push_back({p.at("j").get<int>(), p.at("y").get<double>(),
                          p.at("n_j").get<std::size_t>(),
                          parse_statistic(p.at("statistic").get<std::string>())});
    }
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCategory::parse_error, std::string("estimate json: ") + ex.what());
  }
}

template <typename Decomposition>
[[nodiscard]] json decomposition_to_json(const Decomposition& d, std::string_view mode) {
  json levels = json::object();
  for (int s = 1; s <= d.depth(); ++s) {
    const auto c = d.detail_at_scale(s);
    levels[std::to_string(d.level_of_scale(s))] = {
        {"scale_index", s}, {"coefficients", std::vector<double>(c.begin(), c.end())}};
  }
  const auto coarse = d.coarse();
  return {{"schema", "hurstlab.decomposition/1"},
          {"mode", mode},
          {"wavelet", d.filter().name},
          {"n", d.n()},
          {"depth", d.depth()},
          {"level_convention", level_convention(d.top_level())},
          {"levels", std::move(levels)},
          {"coarse", std::vector<double>(coarse.begin(), coarse.end())}};
}

[[nodiscard]] inline json to_json(const TheoreticalLaw& law) {
  return {{"method", method_name(law.method)},
          {"mean", law.mean},
          {"variance", law.variance},
          {"N", law.sample_size},
          {"m", law.levels}};
}

[[nodiscard]] inline json to_json(const NormalityReport& r) {
  json qq = json::array();
  for (const auto& [t, e] : r.qq) qq.push_back({t, e});
  return {{"mean", r.moments.mean},
          {"variance", r.moments.variance},
          {"skewness", r.moments.skewness},
          {"excess_kurtosis", r.moments.excess_kurtosis},
          {"ks_distance", r.ks_distance},
          {"ks_critical_alpha_0_01", r.ks_critical},
          {"consistent_with_law", r.consistent_with_law},
          {"qq", std::move(qq)}};
}

[[nodiscard]] inline json to_json(const ExperimentConfig& c) {
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(method_name(m));
  const auto levels = c.resolved_levels();
  return {{"hursts", c.hursts},     {"n", c.n},
          {"reps", c.reps},         {"wavelet", c.wavelet},
          {"depth", c.depth},       {"levels", {{"j_lo", levels.j_lo}, {"j_hi", levels.j_hi}}},
          {"methods", methods},     {"base_seed", c.base_seed},
          {"sigma", c.sigma},       {"level_convention", level_convention(ceil_log2(c.n))}};
}

[[nodiscard]] inline json to_json(const SimulationReport& report) {
  json cells = json::array();
  const auto rankings = report.config.methods.size() >= 2 ? compare_methods(report)
                                                          : std::vector<MethodRanking>{};
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& cell = report.cells[i];
    json methods = json::array();
    for (const auto& m : cell.methods) {
      methods.push_back({{"method", method_name(m.method)},
                         {"mean", m.mean},
                         {"variance", m.variance},
                         {"bias_squared", m.bias_squared},
                         {"mse", m.mse},
                         {"estimates", m.estimates}});
    }
    json ranking = json::array();
    if (i < rankings.size()) {
      for (const auto& r : rankings[i].order) {
        ranking.push_back({{"method", method_name(r.method)}, {"mse", r.mse},
                           {"delta_from_best", r.delta_from_best}});
      }
    }
    cells.push_back({{"hurst", cell.hurst},
                     {"methods", std::move(methods)},
                     {"ranking", std::move(ranking)},
                     {"failed_replicates", cell.failed_replicates},
                     {"failure_reasons", cell.failure_reasons}});
  }
  return {{"schema", "hurstlab.simulation/1"},
          {"config", to_json(report.config)},
          {"cells", std::move(cells)},
          {"wall_seconds", report.wall_seconds}};
}

// ---------------------------------------------------------------------------
// CSV tables

[[nodiscard]] inline std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[nodiscard]] inline std::string spectrum_csv(const HurstEstimate& e) {
  std::string out = "j,y\n";
  for (const auto& p : e.points) out += std::to_string(p.j) + "," + format_number(p.y) + "\n";
  return out;
}

[[nodiscard]] inline std::string acf_csv(std::span<const double> r) {
  std::string out = "lag,acf\n";
  for (std::size_t h = 0; h < r.size(); ++h) out += std::to_string(h) + "," + format_number(r[h]) + "\n";
  return out;
}

[[nodiscard]] inline std::string qq_csv(const NormalityReport& r) {
  std::string out = "theoretical,empirical\n";
  for (const auto& [t, e] : r.qq) out += format_number(t) + "," + format_number(e) + "\n";
  return out;
}

/// One block per H: a "H=<h>" line, a header row of method labels, then the
/// Mean / Variance / Bias-squared / MSE rows.
[[nodiscard]] inline std::string report_table_csv(const SimulationReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& cell = report.cells[i];
    if (i > 0) out << "\n";
    out << "H=" << format_number(cell.hurst) << "\n";
    out << "Method";
    for (const auto& m : cell.methods) out << "," << method_label(m.method);
    out << "\n";
    const auto row = [&](std::string_view label, auto field) {
      out << label;
      for (const auto& m : cell.methods) out << "," << format_number(field(m));
      out << "\n";
    };
    row("Mean", [](const MethodSummary& m) { return m.mean; });
    row("Variance", [](const MethodSummary& m) { return m.variance; });
    row("Bias-squared", [](const MethodSummary& m) { return m.bias_squared; });
    row("MSE", [](const MethodSummary& m) { return m.mse; });
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Run manifest

struct InputRecord {
  std::string name;
  std::uint64_t digest = 0;
};

struct RunManifest {
  std::vector<std::string> command;
  json config = json::object();
  std::vector<InputRecord> inputs;
  std::string started_utc;
};

/// Drops directories from anything that looks like a path.
[[nodiscard]] inline std::string portable_argument(std::string_view arg) {
  const auto eq = arg.find('=');
  if (eq != std::string_view::npos && arg.starts_with("--")) {
    return std::string(arg.substr(0, eq + 1)) + portable_argument(arg.substr(eq + 1));
  }
  if (arg.find('/') == std::string_view::npos) return std::string(arg);
  return std::filesystem::path(arg).filename().string();
}

[[nodiscard]] inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[nodiscard]] inline RunManifest make_manifest(int argc, const char* const* argv) {
  RunManifest m;
  for (int i = 0; i < argc; ++i) m.command.push_back(portable_argument(argv[i]));
  m.started_utc = utc_now();
  return m;
}

[[nodiscard]] inline json to_json(const RunManifest& m) {
  json inputs = json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"name", in.name}, {"digest", hex64(in.digest)}});
  return {{"command", m.command},
          {"version", kVersion},
          {"started_utc", m.started_utc},
          {"finished_utc", utc_now()},
          {"config", m.config},
          {"inputs", std::move(inputs)}};
}

inline void write_json(const json& payload, const std::filesystem::path& path) {
  write_file_atomic(path, payload.dump(2) + "\n");
}

}  // namespace hurstlab::io
