#include "hmu/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "hmu/summation.hpp"

namespace hmu {

QuadPoint quad_point_from_t(double t) {
  if (!(t >= 0.0 && t < 1.0))
    throw std::domain_error("quad_point_from_t: t must lie in [0,1)");
  QuadPoint p;
  p.t = t;
  p.one_minus_t = 1.0 - t;
  p.u = -std::log1p(-t);
  p.log_w = std::numbers::ln2 + p.u;
  return p;
}

QuadPoint quad_point_from_u(double u) {
  if (!(u >= 0.0)) throw std::domain_error("quad_point_from_u: u must be >= 0");
  QuadPoint p;
  p.u = u;
  p.one_minus_t = std::exp(-u);
  p.t = -std::expm1(-u);
  p.log_w = std::numbers::ln2 + u;
  return p;
}

namespace {

// Newton iteration on the Legendre recurrence; standard Golub-Welsch
// alternative avoided to keep this dependency-free.
GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n / 2 + n % 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mutex;

double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   int order, double* abs_out) {
  const GaussRule& r = gauss_rule(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0, sa = 0.0;
  for (int i = 0; i < order; ++i) {
    double v = f(mid + half * r.x[i]);
    s += r.w[i] * v;
    sa += r.w[i] * std::abs(v);
  }
  if (abs_out) *abs_out = sa * half;
  return s * half;
}

// Adaptive bisection: accept a panel when the 15-point and split 15-point
// results agree to tol (absolute, scale passed in by caller).
void adaptive_panel(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, KahanSum& acc, KahanSum& abs_acc) {
  double abs1 = 0.0;
  double whole = gauss_panel(f, a, b, 15, &abs1);
  double m = 0.5 * (a + b);
  double absl = 0.0, absr = 0.0;
  double left = gauss_panel(f, a, m, 15, &absl);
  double right = gauss_panel(f, m, b, 15, &absr);
  double err = std::abs(whole - (left + right));
  if (err < tol || depth >= 24) {
    acc.add(left);
    acc.add(right);
    abs_acc.add(absl);
    abs_acc.add(absr);
    return;
  }
  adaptive_panel(f, a, m, 0.5 * tol, depth + 1, acc, abs_acc);
  adaptive_panel(f, m, b, 0.5 * tol, depth + 1, acc, abs_acc);
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(order);
  if (it == g_rules.end()) it = g_rules.emplace(order, make_gauss_rule(order)).first;
  return it->second;
}

IntegralResult integrate_u(const std::function<double(double)>& f, double u0,
                           double rel_tol) {
  IntegralResult out;
  KahanSum acc, abs_acc;
  const int max_panels = 5000;
  double prev = 0.0;
  int nondecay = 0, zero_run = 0;
  for (int m = 0; m < max_panels; ++m) {
    double a = u0 + double(m), b = a + 1.0;
    KahanSum pacc, pabs;
    double rough = 0.0;
    gauss_panel(f, a, b, 15, &rough);
    double scale = std::max(abs_acc.value(), rough);
    adaptive_panel(f, a, b, rel_tol * std::max(scale, 1e-300) * 0.1 + 1e-300, 0,
                   pacc, pabs);
    double pv = pacc.value(), pa = pabs.value();
    acc.add(pv);
    abs_acc.add(pa);
    if (std::abs(acc.value()) > 1e250 || !std::isfinite(acc.value())) {
      out.diverged = true;
      break;
    }
    zero_run = (pa == 0.0) ? zero_run + 1 : 0;
    // nothing found yet: keep marching a while (integrand may switch on late),
    // but an identically-zero run this long means there is nothing to find
    if (abs_acc.value() == 0.0 && zero_run >= 300) break;
    if (m > 0 && abs_acc.value() > 0.0) {
      if (pa >= prev && pa > rel_tol * abs_acc.value())
        ++nondecay;
      else
        nondecay = 0;
      if (nondecay >= 12) {
        out.diverged = true;
        break;
      }
      // geometric tail projection
      if (pa < prev && prev > 0.0) {
        double ratio = pa / prev;
        double tail = (ratio < 0.999) ? pa * ratio / (1.0 - ratio) : 1e300;
        if (tail < rel_tol * std::max(abs_acc.value(), 1e-300) && m >= 2) break;
      }
      if (pa == 0.0 && prev == 0.0 && m >= 2) break;
    }
    prev = pa;
    if (m == max_panels - 1 && abs_acc.value() > 0.0) out.diverged = true;
  }
  out.value = acc.value();
  out.abs_integral = abs_acc.value();
  return out;
}

double integrate_range(const std::function<double(double)>& f, double a,
                       double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  KahanSum acc, abs_acc;
  // first sweep at coarse resolution to fix the tolerance scale
  int coarse = std::max(1, int(std::ceil(b - a)));
  double scale = 0.0;
  for (int m = 0; m < coarse; ++m) {
    double lo = a + (b - a) * m / coarse, hi = a + (b - a) * (m + 1) / coarse;
    double ab = 0.0;
    gauss_panel(f, lo, hi, 15, &ab);
    scale += ab;
  }
  double tol = rel_tol * std::max(scale, 1e-300) * 0.1 + 1e-300;
  for (int m = 0; m < coarse; ++m) {
    double lo = a + (b - a) * m / coarse, hi = a + (b - a) * (m + 1) / coarse;
    adaptive_panel(f, lo, hi, tol / coarse, 0, acc, abs_acc);
  }
  return acc.value();
}

ComplexIntegralResult integrate_u_complex(
    const std::function<std::complex<double>(double)>& f, double u0,
    double rel_tol) {
  // March real and imaginary parts with a shared |.| envelope.
  ComplexIntegralResult out;
  KahanSumComplex acc;
  KahanSum abs_acc;
  const GaussRule& r = gauss_rule(20);
  const int max_panels = 5000;
  double prev = 0.0;
  int nondecay = 0, zero_run = 0;
  auto panel = [&](double a, double b, std::complex<double>& val, double& av) {
    // fixed 20-point panel + 2x10 refinement check
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> s{0.0, 0.0};
    double sa = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::complex<double> v = f(mid + half * r.x[i]);
      s += r.w[i] * v;
      sa += r.w[i] * std::abs(v);
    }
    val = s * half;
    av = sa * half;
  };
  std::function<void(double, double, double, int)> refine =
      [&](double a, double b, double tol, int depth) {
        std::complex<double> whole, left, right;
        double aw, al, ar;
        panel(a, b, whole, aw);
        double m = 0.5 * (a + b);
        panel(a, m, left, al);
        panel(m, b, right, ar);
        if (std::abs(whole - (left + right)) < tol || depth >= 24) {
          acc.add(left);
          acc.add(right);
          abs_acc.add(al + ar);
          return;
        }
        refine(a, m, 0.5 * tol, depth + 1);
        refine(m, b, 0.5 * tol, depth + 1);
      };
  for (int m = 0; m < max_panels; ++m) {
    double a = u0 + double(m), b = a + 1.0;
    double before = abs_acc.value();
    std::complex<double> rv;
    double rough = 0.0;
    panel(a, b, rv, rough);
    double scale = std::max(before, rough);
    refine(a, b, rel_tol * std::max(scale, 1e-300) * 0.1 + 1e-300, 0);
    double pa = abs_acc.value() - before;
    if (std::abs(acc.value()) > 1e250 || !std::isfinite(std::abs(acc.value()))) {
      out.diverged = true;
      break;
    }
    zero_run = (pa == 0.0) ? zero_run + 1 : 0;
    if (abs_acc.value() == 0.0 && zero_run >= 300) break;
    if (m > 0 && abs_acc.value() > 0.0) {
      if (pa >= prev && pa > rel_tol * abs_acc.value())
        ++nondecay;
      else
        nondecay = 0;
      if (nondecay >= 12) {
        out.diverged = true;
        break;
      }
      if (pa < prev && prev > 0.0) {
        double ratio = pa / prev;
        double tail = (ratio < 0.999) ? pa * ratio / (1.0 - ratio) : 1e300;
        if (tail < rel_tol * std::max(abs_acc.value(), 1e-300) && m >= 2) break;
      }
      if (pa == 0.0 && prev == 0.0 && m >= 2) break;
    }
    prev = pa;
    if (m == max_panels - 1 && abs_acc.value() > 0.0) out.diverged = true;
  }
  out.value = acc.value();
  return out;
}

}  // namespace hmu
