#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hurstlab {

/// Failure categories. Each maps to a stable token that the CLI prints so
/// scripts can branch on it.
enum class ErrorCategory {
  invalid_parameter,
  depth_exceeds_levels,
  signal_shorter_than_filter,
  non_dyadic_length,
  sequence_too_short,
  all_zero_level,
  no_admissible_pair,
  odd_length_level,
  non_consecutive_levels,
  range_invalid,
  too_few_estimates,
  single_method_report,
  too_many_failed_replicates,
  not_found,
  parse_error,
  empty_file,
  non_finite_sample,
  io_error,
  unsupported_format,
};

[[nodiscard]] constexpr std::string_view category_token(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_parameter: return "invalid-parameter";
    case ErrorCategory::depth_exceeds_levels: return "depth-exceeds-J";
    case ErrorCategory::signal_shorter_than_filter: return "signal-shorter-than-filter";
    case ErrorCategory::non_dyadic_length: return "non-dyadic-length";
    case ErrorCategory::sequence_too_short: return "sequence-too-short";
    case ErrorCategory::all_zero_level: return "all-zero-level";
    case ErrorCategory::no_admissible_pair: return "no-admissible-pair";
    case ErrorCategory::odd_length_level: return "odd-length-level";
    case ErrorCategory::non_consecutive_levels: return "non-consecutive-levels";
    case ErrorCategory::range_invalid: return "range-invalid";
    case ErrorCategory::too_few_estimates: return "too-few-estimates";
    case ErrorCategory::single_method_report: return "single-method-report";
    case ErrorCategory::too_many_failed_replicates: return "too-many-failed-replicates";
    case ErrorCategory::not_found: return "not-found";
    case ErrorCategory::parse_error: return "parse-error";
    case ErrorCategory::empty_file: return "empty-file";
    case ErrorCategory::non_finite_sample: return "non-finite-sample";
    case ErrorCategory::io_error: return "io-error";
    case ErrorCategory::unsupported_format: return "unsupported-format-for-payload";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

namespace detail {

inline void require(bool condition, ErrorCategory category, const std::string& message) {
  if (!condition) throw Error(category, message);
}

}  // namespace detail
}  // namespace hurstlab
