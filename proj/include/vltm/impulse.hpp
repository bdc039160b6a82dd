#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vltm/relay.hpp"
#include "vltm/time_axis.hpp"

namespace vltm {

/// Time-resolved impulse response H(x_l, x_s, t): relative radiant flux per
/// bin for every (laser point, SPAD point) pair. Payload is laser-major,
/// then SPAD, then time. Kept in binary64 in memory (phasor sums cancel
/// deeply, so binary32 quantization would dominate focused values); the
/// on-disk format narrows to binary32 at the file boundary.
struct ImpulseResponse {
  RelayTopology topology;
  TimeAxis time_axis;
  std::vector<double> data;  // laser-major, then SPAD, then time

  ImpulseResponse() = default;
  ImpulseResponse(RelayTopology topo, TimeAxis axis)
      : topology(std::move(topo)),
        time_axis(axis),
        data(topology.laser_count() * topology.spad_count() * time_axis.bin_count, 0.0) {}

  std::size_t bin_count() const { return time_axis.bin_count; }

  std::size_t index(std::size_t l, std::size_t s, std::size_t i) const {
    return (l * topology.spad_count() + s) * time_axis.bin_count + i;
  }

  double& at(std::size_t l, std::size_t s, std::size_t i) { return data[index(l, s, i)]; }
  double at(std::size_t l, std::size_t s, std::size_t i) const { return data[index(l, s, i)]; }

  /// Pointer to the bin_count-long histogram of one (laser, SPAD) pair.
  const double* pair_begin(std::size_t l, std::size_t s) const { return data.data() + index(l, s, 0); }

  void validate() const {
    topology.validate();
    time_axis.validate();
    const std::size_t want = topology.laser_count() * topology.spad_count() * time_axis.bin_count;
    if (data.size() != want)
      throw std::invalid_argument("ImpulseResponse: data size inconsistent with topology/time axis");
    for (double v : data) {
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("ImpulseResponse: entries must be finite and nonnegative");
    }
  }

  ImpulseResponse scaled(double s) const {
    ImpulseResponse out = *this;
    for (double& v : out.data) v *= s;
    return out;
  }

  /// Copy with the payload delayed by `bins` and the axis lengthened to fit,
  /// used for time-shift equivariance checks.
  ImpulseResponse delayed(std::size_t bins) const {
    ImpulseResponse out(topology, TimeAxis{time_axis.bin_width, time_axis.bin_count + bins, time_axis.origin});
    for (std::size_t l = 0; l < topology.laser_count(); ++l)
      for (std::size_t s = 0; s < topology.spad_count(); ++s)
        for (std::size_t i = 0; i < time_axis.bin_count; ++i)
          out.at(l, s, i + bins) = at(l, s, i);
    return out;
  }
};

}  // namespace vltm
