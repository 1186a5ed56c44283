#pragma once

#include <vector>

#include "hmu/estimate.hpp"
#include "hmu/series.hpp"

namespace hmu {

struct MobiusPoint {
  Complex a;  // |a| < 1, enforced by mobius_point
};

MobiusPoint mobius_point(Complex a);

// radii 1 - 2^{-j/2} for j = 0..2J, `angles` points per radius
std::vector<MobiusPoint> mobius_grid(int J = 16, int angles = 16);

// sup over z = (1-2^{-j/4}) e^{i theta_k}, j = 0..4J, of (1-|z|^2)|f'(z)|
NormEstimate bloch_seminorm(const TaylorPolynomial& f, int J = 16, int K = 0);

// samples of f(phi_a(e^{i theta_k})) - f(a), theta_k = 2 pi k/K
std::vector<Complex> mobius_compose(const TaylorPolynomial& f, MobiusPoint a,
                                    int K);

// mean of |s|^2 over the samples (trapezoid Parseval on the circle)
double h2_norm_sq(const std::vector<Complex>& samples);

// sup_a ||f o phi_a - f(a)||_{H^2}; the H^2 norm at each a is evaluated in
// closed form through the Gram recurrence <phi_a^j, phi_a^k> = a^{j-k},
// which stays exact at radii where circle sampling underresolves.
// K is accepted for interface parity with the sampling route and ignored.
NormEstimate bmoa_seminorm(const TaylorPolynomial& f,
                           const std::vector<MobiusPoint>& a_grid = {},
                           int K = 0);

// sup_a (int_D |f'|^2 g(z,a)^s dA/pi)^{1/2}. After the involution z ->
// phi_a(w) this is Gamma(s+1) 2^{-s} sum_m m^{1-s} |c_m|^2 over the Taylor
// coefficients c of f o phi_a, computed exactly per mode; m_cap = 0 lets the
// mode count adapt to the coefficient decay.
NormEstimate qs_seminorm(const TaylorPolynomial& f, double s,
                         const std::vector<MobiusPoint>& a_grid = {},
                         int m_cap = 0);

struct AreaGrid {
  int gauss_order = 24;  // radial rule per unit panel in u = -log(1-r)
  double u_cap = 0.0;    // 0: stop when panels stop contributing
  int angular = 0;       // 0: 4x oversampling of the integrand degree
};

// (int_D (1-|z|^2)^{p-2} |f'|^p dA/pi)^{1/p}
NormEstimate besov_seminorm_area(const TaylorPolynomial& f, double p,
                                 AreaGrid grid = {});

// (sum_n 2^{-n(p-1)} ||Delta_n f'||_{H^p}^p)^{1/p}
NormEstimate besov_seminorm_blocks(const TaylorPolynomial& f, double p);

struct BergmanPair {
  double q1 = 0.0;  // int_D |f|^p (1-|z|)^alpha dA/pi
  double q2 = 0.0;  // sum_n 2^{-n(alpha+1)} ||Delta_n f||_{H^p}^p
};

BergmanPair bergman_block_equivalence(const TaylorPolynomial& f, double p,
                                      double alpha);

}  // namespace hmu
