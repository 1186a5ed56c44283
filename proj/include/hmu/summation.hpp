#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace hmu {

// Neumaier-compensated accumulator. Deterministic: the result depends only
// on the order of add() calls, never on threading or chunking.
class KahanSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanSumComplex {
public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
  KahanSum re_, im_;
};

inline double compensated_sum(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace hmu
