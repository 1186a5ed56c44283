#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hmu/estimate.hpp"

namespace hmu {

using Complex = std::complex<double>;

// truncated Taylor series a_0 + a_1 z + ... + a_N z^N
struct TaylorPolynomial {
  std::vector<Complex> coeffs;

  TaylorPolynomial() : coeffs(1, Complex{0.0, 0.0}) {}
  explicit TaylorPolynomial(std::vector<Complex> c);
  static TaylorPolynomial from_real(const std::vector<double>& c);

  int degree() const { return int(coeffs.size()) - 1; }
};

Complex eval(const TaylorPolynomial& f, Complex z);
TaylorPolynomial derivative(const TaylorPolynomial& f);
TaylorPolynomial dilate(const TaylorPolynomial& f, double r);

// block 0 holds indices {0,1}, block j >= 1 holds 2^j..2^{j+1}-1;
// blocks keep absolute coefficient positions (leading zeros)
struct BlockDecomposition {
  std::vector<TaylorPolynomial> blocks;
};

BlockDecomposition dyadic_blocks(const TaylorPolynomial& f);
TaylorPolynomial reassemble(const BlockDecomposition& d);

// (1/2pi \int |f(r e^{i t})|^p dt)^{1/p} by trapezoid sampling.
// samples = 0 picks 4x the coefficient count (16x for p < 1),
// rounded up to a power of two; explicit sample counts below
// 4*(degree+1) are rejected.
NormEstimate hp_norm(const TaylorPolynomial& f, double p, double r,
                     int samples = 0);

struct BlockFunctional {
  std::vector<double> terms;  // term n-1 covers indices 2^n+1..2^{n+1}
  double value = 0.0;         // partial sum of terms
  bool divergent = false;     // last-decade slope of terms >= 0
};

// sum over n of (sum_{k=2^n+1}^{2^{n+1}} |lambda_k|^2)^{1/2}
BlockFunctional anderson_shields_functional(const std::vector<Complex>& lambda,
                                            int n_blocks);
BlockFunctional anderson_shields_functional(const std::vector<double>& lambda,
                                            int n_blocks);
// generator form: abs2(k) = |lambda_k|^2, evaluated lazily so the block
// range may extend far beyond anything enumerable; blocks above
// 2^22 indices are integrated instead of summed (abs2 must be smooth there)
BlockFunctional anderson_shields_functional(
    const std::function<double(double)>& abs2, int n_blocks);

// sum_{k>=1} k^{weight_exponent} |a_k|^p
double coef_power_sum(const TaylorPolynomial& f, double p,
                      double weight_exponent);

// (sum_n (n+1)^{1-alpha} |a_n|^2)^{1/2}
double d_alpha_norm(const TaylorPolynomial& f, double alpha);

enum class LogPowerVariant { shifted, plain };

// shifted: a_n = 1/((n+1) (log(n+2))^alpha), n = 0..N
// plain:   a_k = 1/(k (log k)^alpha), k = 2..N (a_0 = a_1 = 0)
TaylorPolynomial logpower_series(double alpha, LogPowerVariant variant, int N);

// CSV rows "index,re,im"
void save_csv(const TaylorPolynomial& f, std::ostream& os);
void save_csv(const TaylorPolynomial& f, const std::string& path);
TaylorPolynomial load_csv(std::istream& is);
TaylorPolynomial load_csv_file(const std::string& path);

std::string blocks_to_json(const BlockDecomposition& d);

}  // namespace hmu
