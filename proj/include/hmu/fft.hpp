#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hmu {

// In-place radix-2 Cooley-Tukey. a.size() must be a power of two.
// sign = -1: forward transform sum a_k e^{-2*pi*i*jk/K}; sign = +1: inverse
// kernel without the 1/K normalization.
void fft_radix2(std::vector<std::complex<double>>& a, int sign);

inline int next_pow2(int n) {
  int k = 1;
  while (k < n) k <<= 1;
  return k;
}

// Values f(r e^{i theta_j}), theta_j = 2*pi*j/K, j = 0..K-1, for the
// polynomial with the given coefficients. K must be a power of two with
// K >= coeffs.size().
std::vector<std::complex<double>> circle_values(
    std::span<const std::complex<double>> coeffs, double r, int K);

}  // namespace hmu
