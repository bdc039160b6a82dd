#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "vltm/simulate.hpp"
#include "vltm/vec3.hpp"

namespace vltm {

/// Parameters of the monochromatic virtual wave: carrier wavelength and the
/// temporal width of the Gaussian gate. The default sigma makes the 99%
/// (+-2.576 sigma) span of the gate equal four propagation wavelengths.
struct WaveParams {
  double wavelength = 0.25;  // meters
  double gate_sigma = default_sigma(0.25);

  static double default_sigma(double lambda) { return 2.0 * lambda / (2.576 * speed_of_light); }

  static WaveParams from_wavelength(double lambda) { return WaveParams{lambda, default_sigma(lambda)}; }

  double angular_frequency() const { return 2.0 * M_PI * speed_of_light / wavelength; }
  double wavenumber() const { return 2.0 * M_PI / wavelength; }

  void validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
      throw std::invalid_argument("WaveParams: wavelength must be positive and finite");
    if (!(gate_sigma > 0.0) || !std::isfinite(gate_sigma))
      throw std::invalid_argument("WaveParams: gate_sigma must be positive and finite");
  }
};

enum class GateKind { Gaussian, HigherOrderComplement };

/// Unit-amplitude temporal gate centered at `center`.
struct GateSpec {
  double center = 0.0;  // seconds
  double sigma = 0.0;   // seconds
  GateKind kind = GateKind::Gaussian;

  void validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("GateSpec: sigma must be positive");
  }
};

/// G(t', t) = exp(-(t - t')^2 / (2 sigma^2)), in (0, 1], peak 1 at t = t'.
inline double gaussian_gate(const GateSpec& spec, double t) {
  const double d = t - spec.center;
  return std::exp(-d * d / (2.0 * spec.sigma * spec.sigma));
}

/// Complement gate selecting paths longer than the 4-vertex time of flight:
/// 0 for t <= t_i4, 1 - G(t_i4, t) for t > t_i4. Computed literally as
/// 1.0 - gaussian_gate so that the two partition unity exactly past t_i4.
inline double higher_order_gate(double t_i4, const GateSpec& spec, double t) {
  if (t <= t_i4) return 0.0;
  return 1.0 - gaussian_gate(GateSpec{t_i4, spec.sigma, GateKind::Gaussian}, t);
}

/// Thin-lens propagation phase e^{-ik ||x_to - x_from||}; exactly unit
/// modulus by construction (cos/sin of the phase).
inline std::complex<double> thin_lens(const Vec3& x_from, const Vec3& x_to,
                                      const WaveParams& params) {
  const double phase = -params.wavenumber() * distance(x_from, x_to);
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace vltm
