#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace vltm {

/// Uniform time sampling of a transient histogram. `origin` is the instant
/// light leaves the laser point on the relay wall (wall-to-wall convention);
/// bin i covers [origin + i*bin_width, origin + (i+1)*bin_width).
struct TimeAxis {
  double bin_width = 85e-12;  // seconds
  std::size_t bin_count = 0;
  double origin = 0.0;  // seconds

  void validate() const {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
      throw std::invalid_argument("TimeAxis: bin_width must be positive and finite");
    if (bin_count < 1) throw std::invalid_argument("TimeAxis: bin_count must be >= 1");
    if (!std::isfinite(origin)) throw std::invalid_argument("TimeAxis: origin must be finite");
  }

  /// Representative sample time of bin i (the bin center).
  double time_at(std::size_t i) const { return origin + (static_cast<double>(i) + 0.5) * bin_width; }

  /// Bin index that time t falls into; may be out of [0, bin_count).
  std::ptrdiff_t bin_of(double t) const {
    return static_cast<std::ptrdiff_t>(std::floor((t - origin) / bin_width));
  }

  bool contains_bin(std::ptrdiff_t i) const {
    return i >= 0 && static_cast<std::size_t>(i) < bin_count;
  }

  double duration() const { return static_cast<double>(bin_count) * bin_width; }

  bool operator==(const TimeAxis& o) const {
    return bin_width == o.bin_width && bin_count == o.bin_count && origin == o.origin;
  }
};

}  // namespace vltm
