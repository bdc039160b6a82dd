#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "vltm/fft.hpp"
#include "vltm/phasor.hpp"
#include "vltm/wave.hpp"

using namespace vltm;

namespace {

std::vector<std::complex<double>> random_complex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> out(n);
  for (auto& v : out) v = {u(rng), u(rng)};
  return out;
}

std::vector<std::complex<double>> convolve_reference(const std::vector<std::complex<double>>& a,
                                                     const std::vector<std::complex<double>>& b) {
  std::vector<std::complex<double>> out(a.size() + b.size() - 1, {0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST(ThinLens, HalfWavelengthFlipsSign) {
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const auto lens = thin_lens({0.0, 0.0, 0.0}, {0.125, 0.0, 0.0}, params);
  EXPECT_DOUBLE_EQ(lens.real(), -1.0);
  EXPECT_NEAR(lens.imag(), 0.0, 1e-12);
}

TEST(ThinLens, QuarterWavelengthIsMinusI) {
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const auto lens = thin_lens({0.0, 0.0, 0.0}, {0.0, 0.0625, 0.0}, params);
  EXPECT_NEAR(lens.real(), 0.0, 1e-12);
  EXPECT_NEAR(lens.imag(), -1.0, 1e-12);
}

TEST(ThinLens, WholeWavelengthMultipleIsUnity) {
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const auto lens = thin_lens({0.0, 0.0, 0.0}, {0.0, 0.0, 6.25}, params);
  EXPECT_NEAR(lens.real(), 1.0, 1e-12);
  EXPECT_NEAR(lens.imag(), 0.0, 1e-12);
}

TEST(ThinLens, UnitModulusEverywhere) {
  const WaveParams params = WaveParams::from_wavelength(0.31);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    EXPECT_NEAR(std::abs(thin_lens(a, b, params)), 1.0, 1e-15);
  }
}

TEST(Gates, GaussianReferenceValues) {
  const GateSpec gate{0.0, 1.0, GateKind::Gaussian};
  EXPECT_DOUBLE_EQ(gaussian_gate(gate, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(gaussian_gate(gate, 1.0), 0.6065306597126334);
  EXPECT_DOUBLE_EQ(gaussian_gate(gate, -1.0), 0.6065306597126334);
  EXPECT_DOUBLE_EQ(gaussian_gate(gate, 2.576), 0.036229267222153305);
}

TEST(Gates, HigherOrderComplementReferenceValues) {
  const double t4 = 2.0;
  const GateSpec gate{t4, 1.0, GateKind::HigherOrderComplement};
  EXPECT_EQ(higher_order_gate(t4, gate, 1.0), 0.0);
  EXPECT_EQ(higher_order_gate(t4, gate, t4), 0.0);
  EXPECT_DOUBLE_EQ(higher_order_gate(t4, gate, 3.0), 0.3934693402873666);
  EXPECT_DOUBLE_EQ(higher_order_gate(t4, gate, t4 + 20.0), 1.0);
}

TEST(Gates, PartitionUnityExactlyPastCenter) {
  const double t4 = 1.0006922855944561e-08;
  const double sigma = 6.474458369529349e-10;
  const GateSpec gate{t4, sigma, GateKind::Gaussian};
  const double step = 12.0 * sigma / 10000.0;
  for (int k = 1; k <= 10000; ++k) {
    const double t = t4 + k * step;
    const double g = gaussian_gate(gate, t);
    const double h = higher_order_gate(t4, gate, t);
    ASSERT_EQ(g + h, 1.0) << "t offset " << k * step;
  }
}

TEST(Gates, SpecValidation) {
  EXPECT_THROW((GateSpec{0.0, 0.0, GateKind::Gaussian}.validate()), std::invalid_argument);
  EXPECT_THROW((GateSpec{0.0, -1.0, GateKind::Gaussian}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((GateSpec{0.0, 1e-10, GateKind::Gaussian}.validate()));
}

TEST(WaveParamsTest, DefaultSigmaSpansFourWavelengths) {
  EXPECT_DOUBLE_EQ(WaveParams::default_sigma(0.25), 6.474458369529349e-10);
  const WaveParams params;
  EXPECT_DOUBLE_EQ(params.wavelength, 0.25);
  EXPECT_DOUBLE_EQ(params.gate_sigma, 6.474458369529349e-10);
  // 2 * 2.576 sigma on either side of the peak covers 4 lambda of travel.
  EXPECT_NEAR(2.0 * 2.576 * params.gate_sigma * speed_of_light, 4.0 * params.wavelength, 1e-15);
  EXPECT_THROW(WaveParams::from_wavelength(0.0).validate(), std::invalid_argument);
}

TEST(GateCenters, DirectRoundTrip) {
  const double t = direct_gate_center({0.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 0.0});
  EXPECT_EQ(t, 1.3342563807926082e-08);
}

TEST(GateCenters, IndirectFourVertexPath) {
  const double t = indirect_gate_center({0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 1.0, 1.0},
                                        {0.0, 0.0, 1.0});
  EXPECT_EQ(t, 1.0006922855944561e-08);
}

TEST(GateCenters, DegenerateIndirectEqualsDirect) {
  const Vec3 x_l{-0.3, 0.0, 0.1};
  const Vec3 x_v{0.2, 0.9, -0.1};
  const Vec3 x_s{0.4, 0.0, 0.25};
  EXPECT_EQ(indirect_gate_center(x_l, x_v, x_v, x_s), direct_gate_center(x_l, x_v, x_s));
}

TEST(Illumination, DegenerateIndirectSignalIsBitIdenticalToDirect) {
  const Vec3 x_l{-0.3, 0.0, 0.1};
  const Vec3 x_v{0.2, 0.9, -0.1};
  const Vec3 x_s{0.4, 0.0, 0.25};
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const TimeAxis axis{85e-12, 160, 0.0};
  const PhasorSignal direct = make_direct_illumination(x_l, x_v, x_s, params, axis);
  const PhasorSignal indirect = make_indirect_illumination(x_l, x_v, x_v, x_s, params, axis);
  ASSERT_EQ(direct.values.size(), indirect.values.size());
  for (std::size_t i = 0; i < direct.values.size(); ++i)
    EXPECT_EQ(direct.values[i], indirect.values[i]) << "bin " << i;
}

TEST(Illumination, PeakMagnitudeIsInverseFocusDistance) {
  const Vec3 x_l{-1.0, 0.0, 0.0};
  const Vec3 x_v{0.0, 2.0, 0.0};
  const Vec3 x_s{1.0, 0.0, 0.0};
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const double t_d = direct_gate_center(x_l, x_v, x_s);
  EXPECT_DOUBLE_EQ(t_d, 1.4917439834325585e-08);
  // Put the gate center exactly on the center of bin 10.
  const TimeAxis axis{85e-12, 128, t_d - 10.5 * 85e-12};
  const PhasorSignal sig = make_direct_illumination(x_l, x_v, x_s, params, axis);
  EXPECT_NEAR(std::abs(sig.at(0, 10)), 0.4472135954999579, 1e-12);
  // 9+ sigma into the tail the envelope has decayed to nothing.
  EXPECT_LT(std::abs(sig.at(0, 120)), 1e-15);
  sig.validate();
}

TEST(Illumination, HigherOrderComplementVanishesUpToGateCenter) {
  const Vec3 x_l{-0.5, 0.0, 0.0};
  const Vec3 x_a{-0.2, 0.8, 0.0};
  const Vec3 x_b{0.3, 0.9, 0.1};
  const Vec3 x_s{0.5, 0.0, 0.0};
  const WaveParams params = WaveParams::from_wavelength(0.25);
  const TimeAxis axis{85e-12, 512, 0.0};
  const double t4 = indirect_gate_center(x_l, x_a, x_b, x_s);
  const PhasorSignal sig = make_indirect_illumination(x_l, x_a, x_b, x_s, params, axis,
                                                      GateKind::HigherOrderComplement);
  const double r = distance(x_l, x_a);
  for (std::size_t i = 0; i < axis.bin_count; ++i) {
    if (axis.time_at(i) <= t4) {
      EXPECT_EQ(sig.at(0, i), (std::complex<double>{0.0, 0.0})) << "bin " << i;
    }
  }
  // Deep in the tail the complement saturates at the bare lensed carrier.
  EXPECT_NEAR(std::abs(sig.at(0, 511)), 1.0 / r, 1e-12);
}

TEST(Illumination, RejectsFocusOnTopOfLaserPoint) {
  const WaveParams params;
  const TimeAxis axis{85e-12, 16, 0.0};
  const Vec3 p{0.1, 0.0, 0.2};
  EXPECT_THROW(make_direct_illumination(p, p, {0.5, 0.0, 0.0}, params, axis),
               std::invalid_argument);
}

TEST(Convolution, DeltaIsIdentity) {
  std::mt19937_64 rng(11);
  const auto b = random_complex(rng, 37);
  const auto out = convolve_time({{1.0, 0.0}}, b);
  ASSERT_EQ(out.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(std::abs(out[i] - b[i]), 0.0, 1e-12);
}

TEST(Convolution, UnitBoxSquared) {
  const std::vector<double> box{1.0, 1.0};
  const auto out = convolve_time(box, box);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_NEAR(out[0], 1.0, 1e-12);
  EXPECT_NEAR(out[1], 2.0, 1e-12);
  EXPECT_NEAR(out[2], 1.0, 1e-12);
}

TEST(Convolution, MatchesDirectSumOnRandomSeries) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(1, 48);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_complex(rng, len(rng));
    const auto b = random_complex(rng, len(rng));
    const auto fast = convolve_time(a, b);
    const auto slow = convolve_reference(a, b);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
      ASSERT_NEAR(std::abs(fast[i] - slow[i]), 0.0, 1e-9) << "trial " << trial << " lag " << i;
  }
}

TEST(Convolution, Bilinear) {
  std::mt19937_64 rng(5);
  const auto a = random_complex(rng, 20);
  const auto b = random_complex(rng, 31);
  auto c = random_complex(rng, 31);
  const std::complex<double> scale{0.7, -1.3};
  std::vector<std::complex<double>> combo(31);
  for (std::size_t i = 0; i < 31; ++i) combo[i] = b[i] + scale * c[i];
  const auto lhs = convolve_time(a, combo);
  const auto ab = convolve_time(a, b);
  const auto ac = convolve_time(a, c);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    EXPECT_NEAR(std::abs(lhs[i] - (ab[i] + scale * ac[i])), 0.0, 1e-10);
}

TEST(Convolution, RejectsEmptyInput) {
  const std::vector<std::complex<double>> empty;
  const std::vector<std::complex<double>> one{{1.0, 0.0}};
  EXPECT_THROW(convolve_time(empty, one), std::invalid_argument);
  EXPECT_THROW(convolve_time(one, empty), std::invalid_argument);
}
