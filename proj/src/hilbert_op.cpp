#include "hmu/hilbert_op.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "hmu/summation.hpp"

namespace hmu {

namespace {

std::mutex g_cache_mutex;
std::map<std::string, std::shared_ptr<const MomentSequence>>& moment_cache() {
  static std::map<std::string, std::shared_ptr<const MomentSequence>> cache;
  return cache;
}

}  // namespace

std::shared_ptr<const MomentSequence> cached_moments(const Measure& mu,
                                                     int max_order) {
  std::string key = mu.spec_text();
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto& cache = moment_cache();
  auto it = cache.find(key);
  if (it != cache.end() &&
      it->second->values.size() > std::size_t(max_order))
    return it->second;
  auto ms = std::make_shared<MomentSequence>(moments(mu, max_order));
  cache[key] = ms;
  return ms;
}

HankelApplication hankel_apply(const Measure& mu, const TaylorPolynomial& f,
                               int n_out) {
  if (n_out < 0)
    throw std::invalid_argument("hankel_apply: n_out must be >= 0");
  int deg = f.degree();
  auto ms = cached_moments(mu, n_out + deg);
  const std::vector<double>& m = ms->values;

  HankelApplication app;
  app.input = f;
  app.moments = *ms;
  app.absolute_row_sums.assign(std::size_t(n_out) + 1, 0.0);
  std::vector<Complex> out(std::size_t(n_out) + 1);

  bool real_input = true;
  for (const Complex& a : f.coeffs)
    if (a.imag() != 0.0) real_input = false;

  if (real_input) {
    std::vector<double> a(f.coeffs.size()), aa(f.coeffs.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = f.coeffs[k].real();
      aa[k] = std::abs(a[k]);
    }
    for (int n = 0; n <= n_out; ++n) {
      KahanSum val, row;
      const double* mrow = m.data() + n;
      for (std::size_t k = 0; k < a.size(); ++k) {
        val.add(mrow[k] * a[k]);
        row.add(mrow[k] * aa[k]);
      }
      out[std::size_t(n)] = Complex{val.value(), 0.0};
      app.absolute_row_sums[std::size_t(n)] = row.value();
    }
  } else {
    for (int n = 0; n <= n_out; ++n) {
      KahanSum re, im, row;
      const double* mrow = m.data() + n;
      for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        re.add(mrow[k] * f.coeffs[k].real());
        im.add(mrow[k] * f.coeffs[k].imag());
        row.add(mrow[k] * std::abs(f.coeffs[k]));
      }
      out[std::size_t(n)] = Complex{re.value(), im.value()};
      app.absolute_row_sums[std::size_t(n)] = row.value();
    }
  }
  app.output = TaylorPolynomial(std::move(out));
  return app;
}

Complex integral_apply(const Measure& mu,
                       const std::function<Complex(const QuadPoint&)>& f,
                       Complex z, double rel_tol) {
  if (!(std::abs(z) < 1.0))
    throw std::domain_error("integral_apply: |z| must be < 1");
  double az = std::abs(z);
  TryIntegral companion = try_integrate(
      mu,
      [&](const QuadPoint& p) {
        return std::abs(f(p)) / (1.0 - p.t * az);
      },
      rel_tol);
  if (companion.diverged)
    throw WellDefinednessError(
        "integral_apply: absolute integral diverges for this input");
  return integrate_complex(
      mu, [&](const QuadPoint& p) { return f(p) / (1.0 - p.t * z); }, rel_tol);
}

Complex integral_apply(const Measure& mu, const TaylorPolynomial& f, Complex z,
                       double rel_tol) {
  return integral_apply(
      mu, [&](const QuadPoint& p) { return eval(f, {p.t, 0.0}); }, z, rel_tol);
}

AgreementReport agreement_check(const Measure& mu, const TaylorPolynomial& f,
                                const std::vector<Complex>& z_grid, int n_out) {
  HankelApplication app = hankel_apply(mu, f, n_out);
  double last_row = app.absolute_row_sums.back();

  AgreementReport rep;
  rep.n_out = n_out;
  for (const Complex& z : z_grid) {
    double az = std::abs(z);
    if (!(az < 1.0))
      throw std::domain_error("agreement_check: grid must lie inside the disk");
    Complex series = eval(app.output, z);
    Complex integral = integral_apply(mu, f, z);
    double diff = std::abs(series - integral);
    if (diff >= rep.max_diff) {
      rep.max_diff = diff;
      rep.argmax_z = z;
    }
    // |b_n| <= row sum at n_out for every n > n_out, so the dropped tail is
    // controlled by the geometric series at |z|
    double tail =
        last_row * std::pow(az, double(n_out) + 1.0) / (1.0 - az);
    rep.tail_bound = std::max(rep.tail_bound, tail);
  }
  return rep;
}

Space Space::besov(double p) {
  if (!(p > 1.0)) throw std::domain_error("Space::besov: p must be > 1");
  Space s;
  s.family = Family::besov;
  s.p = p;
  return s;
}

Definedness classify_besov(bool exponent_converges,
                           const std::vector<bool>& ladder_converges) {
  if (exponent_converges) return Definedness::defined;
  for (bool ok : ladder_converges)
    if (!ok) return Definedness::undefined;
  return Definedness::boundary;
}

WellDefinednessReport well_definedness_test(const Measure& mu, Space space) {
  auto log_integral = [&](double e) {
    return try_integrate(
        mu, [e](const QuadPoint& p) { return std::pow(p.log_w, e); }, 1e-11);
  };

  WellDefinednessReport rep;
  if (space.family == Space::Family::bloch_bmoa_qs) {
    rep.exponent = 1.0;
    TryIntegral r = log_integral(1.0);
    rep.integral = r.value;
    rep.diverged = r.diverged;
    rep.verdict = r.diverged ? Definedness::undefined : Definedness::defined;
    return rep;
  }

  double pprime = space.p / (space.p - 1.0);
  double e = 1.0 / pprime;
  rep.exponent = e;
  TryIntegral top = log_integral(e);
  rep.integral = top.value;
  rep.diverged = top.diverged;
  std::vector<bool> ladder_ok;
  if (top.diverged) {
    for (int i = 1; i <= 6; ++i) {
      double gamma = e * (1.0 - std::ldexp(1.0, -i));
      TryIntegral r = log_integral(gamma);
      rep.ladder.push_back({gamma, r.value, r.diverged});
      ladder_ok.push_back(!r.diverged);
    }
  }
  rep.verdict = classify_besov(!top.diverged, ladder_ok);
  return rep;
}

}  // namespace hmu
