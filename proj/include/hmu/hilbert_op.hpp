#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hmu/measure.hpp"
#include "hmu/series.hpp"

namespace hmu {

// companion absolute-integral test failed: the defining integral does not
// converge absolutely for this input
struct WellDefinednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HankelApplication {
  TaylorPolynomial input;
  MomentSequence moments;  // indices 0 .. (>= N_out + degree)
  TaylorPolynomial output;
  std::vector<double> absolute_row_sums;  // sum_k mu_{n+k} |a_k|
};

// b_n = sum_{k<=deg f} mu_{n+k} a_k for n = 0..n_out
HankelApplication hankel_apply(const Measure& mu, const TaylorPolynomial& f,
                               int n_out);

// moment sequences memoized per measure text form; the returned sequence may
// be longer than requested
std::shared_ptr<const MomentSequence> cached_moments(const Measure& mu,
                                                     int max_order);

// int f(t)/(1-tz) dmu(t); the absolute companion integral is evaluated first
// and divergence raises WellDefinednessError
Complex integral_apply(const Measure& mu,
                       const std::function<Complex(const QuadPoint&)>& f,
                       Complex z, double rel_tol = 1e-10);
Complex integral_apply(const Measure& mu, const TaylorPolynomial& f, Complex z,
                       double rel_tol = 1e-10);

struct AgreementReport {
  double max_diff = 0.0;   // max over grid of |series eval - integral|
  Complex argmax_z;
  double tail_bound = 0.0;  // max over grid of rowsum * |z|^{n+1}/(1-|z|)
  int n_out = 0;
};

AgreementReport agreement_check(const Measure& mu, const TaylorPolynomial& f,
                                const std::vector<Complex>& z_grid, int n_out);

enum class Definedness { defined, undefined, boundary };

struct Space {
  enum class Family { bloch_bmoa_qs, besov };
  Family family = Family::bloch_bmoa_qs;
  double p = 0.0;  // Besov integrability index

  static Space bloch_bmoa_qs() { return {}; }
  static Space besov(double p);
};

struct LadderEntry {
  double gamma = 0.0;
  double value = 0.0;
  bool diverged = false;
};

struct WellDefinednessReport {
  Definedness verdict = Definedness::defined;
  double exponent = 1.0;  // log-weight exponent of the integral tested
  double integral = 0.0;
  bool diverged = false;
  std::vector<LadderEntry> ladder;  // sub-critical exponents, Besov only
};

// classification rule for the Besov verdict, split out so it can be tested
// on synthetic convergence flags
Definedness classify_besov(bool exponent_converges,
                           const std::vector<bool>& ladder_converges);

WellDefinednessReport well_definedness_test(const Measure& mu, Space space);

}  // namespace hmu
