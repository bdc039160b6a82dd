#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "vltm/time_axis.hpp"
#include "vltm/vec3.hpp"
#include "vltm/wave.hpp"

namespace vltm {

/// Complex-valued virtual emission profile sampled at a set of relay points
/// over a shared time axis. Values are point-major, then time.
struct PhasorSignal {
  std::vector<Vec3> points;
  std::vector<std::complex<double>> values;  // point-major, then time
  TimeAxis time_axis;

  std::complex<double>& at(std::size_t p, std::size_t i) {
    return values[p * time_axis.bin_count + i];
  }
  std::complex<double> at(std::size_t p, std::size_t i) const {
    return values[p * time_axis.bin_count + i];
  }

  void validate() const {
    time_axis.validate();
    if (values.size() != points.size() * time_axis.bin_count)
      throw std::invalid_argument("PhasorSignal: value tensor inconsistent with points/time axis");
    for (const std::complex<double>& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("PhasorSignal: nonfinite sample");
  }
};

/// Gate center of the 3-vertex path <x_l, x_v, x_s>.
inline double direct_gate_center(const Vec3& x_l, const Vec3& x_v, const Vec3& x_s) {
  return (distance(x_s, x_v) + distance(x_l, x_v)) / speed_of_light;
}

/// Gate center of the 4-vertex path <x_l, x_a, x_b, x_s>. Degenerates to
/// direct_gate_center when x_a = x_b.
inline double indirect_gate_center(const Vec3& x_l, const Vec3& x_a, const Vec3& x_b,
                                   const Vec3& x_s) {
  return (distance(x_a, x_l) + distance(x_b, x_a) + distance(x_s, x_b)) / speed_of_light;
}

namespace detail {

inline PhasorSignal gated_carrier_signal(const Vec3& x_l, const Vec3& lens_target,
                                         double gate_center, GateKind gate_kind,
                                         const WaveParams& params, const TimeAxis& axis) {
  params.validate();
  axis.validate();
  const double r = distance(x_l, lens_target);
  if (!(r > 0.0))
    throw std::invalid_argument("illumination: focus target coincides with the laser point");
  const std::complex<double> lens = thin_lens(x_l, lens_target, params) / r;
  const GateSpec gate{gate_center, params.gate_sigma, GateKind::Gaussian};
  const double omega = params.angular_frequency();

  PhasorSignal out;
  out.points = {x_l};
  out.time_axis = axis;
  out.values.resize(axis.bin_count);
  for (std::size_t i = 0; i < axis.bin_count; ++i) {
    const double t = axis.time_at(i);
    const double envelope = gate_kind == GateKind::Gaussian
                                ? gaussian_gate(gate, t)
                                : higher_order_gate(gate_center, gate, t);
    out.values[i] = envelope * std::complex<double>(std::cos(omega * t), std::sin(omega * t)) * lens;
  }
  return out;
}

}  // namespace detail

/// Virtual illumination that focuses the wave at x_v and gates on the
/// 3-vertex round trip: envelope G(t_d, t), carrier e^{i omega t}, thin lens
/// from x_l to x_v over 1/r. One signal per (laser, SPAD) pair since t_d
/// depends on both wall points.
inline PhasorSignal make_direct_illumination(const Vec3& x_l, const Vec3& x_v, const Vec3& x_s,
                                             const WaveParams& params, const TimeAxis& axis,
                                             double gate_time_offset = 0.0) {
  return detail::gated_carrier_signal(x_l, x_v, direct_gate_center(x_l, x_v, x_s) + gate_time_offset,
                                      GateKind::Gaussian, params, axis);
}

/// Virtual illumination for the 4-vertex path <x_l, x_a, x_b, x_s>: gate
/// centered at t_i4, thin lens focused from x_l onto x_a. The
/// HigherOrderComplement kind swaps the Gaussian envelope for the
/// longer-than-t_i4 complement gate.
inline PhasorSignal make_indirect_illumination(const Vec3& x_l, const Vec3& x_a, const Vec3& x_b,
                                               const Vec3& x_s, const WaveParams& params,
                                               const TimeAxis& axis,
                                               GateKind gate_kind = GateKind::Gaussian,
                                               double gate_time_offset = 0.0) {
  return detail::gated_carrier_signal(
      x_l, x_a, indirect_gate_center(x_l, x_a, x_b, x_s) + gate_time_offset, gate_kind, params, axis);
}

}  // namespace vltm
