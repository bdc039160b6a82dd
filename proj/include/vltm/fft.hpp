#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace vltm {

namespace detail {

/// In-place iterative radix-2 FFT (inverse when invert is true, including
/// the 1/n scale). Size must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool invert) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (invert ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (invert) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::complex<double>& x : a) x *= inv_n;
  }
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Full linear convolution of two complex time series sampled on the same
/// bin width: output length n_a + n_b - 1, computed by zero-padded FFT.
inline std::vector<std::complex<double>> convolve_time(
    const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("convolve_time: empty input");
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = detail::next_pow2(out_len);
  std::vector<std::complex<double>> fa(n, {0.0, 0.0}), fb(n, {0.0, 0.0});
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  detail::fft_pow2(fa, false);
  detail::fft_pow2(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  detail::fft_pow2(fa, true);
  fa.resize(out_len);
  return fa;
}

/// Real-input overload; returns the real part of the complex convolution.
inline std::vector<double> convolve_time(const std::vector<double>& a,
                                         const std::vector<double>& b) {
  std::vector<std::complex<double>> ca(a.begin(), a.end()), cb(b.begin(), b.end());
  const auto full = convolve_time(ca, cb);
  std::vector<double> out(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) out[i] = full[i].real();
  return out;
}

}  // namespace vltm
