#pragma once

#include <array>
#include <string>
#include <string_view>

#include "hurstlab/error.hpp"

namespace hurstlab {

enum class Method { traditional, soltani, medl, medla };

inline constexpr std::array<Method, 4> kAllMethods = {Method::traditional, Method::soltani,
                                                      Method::medl, Method::medla};

[[nodiscard]] constexpr std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::traditional: return "traditional";
    case Method::soltani: return "soltani";
    case Method::medl: return "medl";
    case Method::medla: return "medla";
  }
  return "?";
}

/// Column heading used in tabular reports.
[[nodiscard]] constexpr std::string_view method_label(Method m) noexcept {
  switch (m) {
    case Method::traditional: return "Traditional";
    case Method::soltani: return "Soltani";
    case Method::medl: return "MEDL";
    case Method::medla: return "MEDLA";
  }
  return "?";
}

[[nodiscard]] inline Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (name == method_name(m)) return m;
  }
  throw Error(ErrorCategory::invalid_parameter, "unknown method '" + std::string(name) + "'");
}

/// Median-based methods work with natural logs; the two baselines use log2.
[[nodiscard]] constexpr bool uses_natural_log(Method m) noexcept {
  return m == Method::medl || m == Method::medla;
}

}  // namespace hurstlab
