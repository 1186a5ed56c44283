#include "hmu/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmu {

void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_radix2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / double(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<std::complex<double>> circle_values(
    std::span<const std::complex<double>> coeffs, double r, int K) {
  if (K < int(coeffs.size()))
    throw std::invalid_argument("circle_values: K < number of coefficients");
  std::vector<std::complex<double>> a(std::size_t(K), {0.0, 0.0});
  double rk = 1.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    a[k] = coeffs[k] * rk;
    rk *= r;
  }
  fft_radix2(a, +1);  // values_j = sum_k a_k r^k e^{+i k theta_j}
  return a;
}

}  // namespace hmu
