#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hurstlab/error.hpp"

namespace hurstlab {

/// Parameters of a fractional Gaussian noise draw. sigma is the standard
/// deviation of a single unit-lag increment.
struct FgnSpec {
  double hurst = 0.5;
  std::size_t length = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(hurst > 0.0 && hurst < 1.0, ErrorCategory::invalid_parameter,
                    "hurst must lie in (0, 1), got " + std::to_string(hurst));
    detail::require(length >= 2, ErrorCategory::invalid_parameter,
                    "length must be at least 2, got " + std::to_string(length));
    detail::require(sigma > 0.0 && std::isfinite(sigma), ErrorCategory::invalid_parameter,
                    "sigma must be positive, got " + std::to_string(sigma));
  }
};

struct IngestedFrom {
  std::string source;
};

using SignalOrigin = std::variant<FgnSpec, IngestedFrom>;

/// Non-empty sequence of finite samples plus where it came from.
class Signal {
 public:
  Signal(std::vector<double> samples, SignalOrigin origin)
      : samples_(std::move(samples)), origin_(std::move(origin)) {
    detail::require(!samples_.empty(), ErrorCategory::empty_file, "signal has no samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      detail::require(std::isfinite(samples_[i]), ErrorCategory::non_finite_sample,
                      "sample " + std::to_string(i) + " is not finite");
    }
  }

  [[nodiscard]] const std::vector<double>& samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] const SignalOrigin& origin() const noexcept { return origin_; }

 private:
  std::vector<double> samples_;
  SignalOrigin origin_;
};

}  // namespace hurstlab
