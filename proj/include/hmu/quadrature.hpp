#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hmu {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point of [0,1) prepared for right-endpoint-accurate work:
// u = -log(1-t), so one_minus_t = e^{-u} and log_w = log(2/(1-t)) = log2 + u
// are computed without cancellation even for t extremely close to 1.
struct QuadPoint {
  double t;
  double one_minus_t;
  double u;
  double log_w;
};

QuadPoint quad_point_from_t(double t);
QuadPoint quad_point_from_u(double u);

// Gauss-Legendre rule on [-1,1]; nodes/weights cached per order.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_rule(int order);

struct IntegralResult {
  double value = 0.0;
  double abs_integral = 0.0;  // integral of |integrand|
  bool diverged = false;
};

// Integrates f over [u0, infinity), marching in unit panels, each refined
// adaptively to rel_tol. Stops when the geometric tail projection drops
// below rel_tol of the accumulated absolute mass; flags divergence when the
// panel contributions stop decaying.
IntegralResult integrate_u(const std::function<double(double)>& f, double u0,
                           double rel_tol = 1e-12);

// Adaptive integral over the finite interval [a, b].
double integrate_range(const std::function<double(double)>& f, double a,
                       double b, double rel_tol = 1e-12);

struct ComplexIntegralResult {
  std::complex<double> value{0.0, 0.0};
  bool diverged = false;
};

ComplexIntegralResult integrate_u_complex(
    const std::function<std::complex<double>(double)>& f, double u0,
    double rel_tol = 1e-12);

}  // namespace hmu
