#include "hmu/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "hmu/fft.hpp"
#include "hmu/quadrature.hpp"
#include "hmu/summation.hpp"

namespace hmu {

MobiusPoint mobius_point(Complex a) {
  if (!(std::abs(a) < 1.0))
    throw std::domain_error("mobius_point: |a| must be < 1");
  return MobiusPoint{a};
}

std::vector<MobiusPoint> mobius_grid(int J, int angles) {
  if (J < 1 || angles < 8)
    throw std::invalid_argument("mobius_grid: need J >= 1, angles >= 8");
  std::vector<MobiusPoint> g;
  g.push_back(MobiusPoint{{0.0, 0.0}});
  for (int j = 1; j <= 2 * J; ++j) {
    double r = 1.0 - std::exp2(-0.5 * j);
    for (int k = 0; k < angles; ++k)
      g.push_back(
          MobiusPoint{std::polar(r, 2.0 * M_PI * (k + 0.5 * (j % 2)) / angles)});
  }
  return g;
}

NormEstimate bloch_seminorm(const TaylorPolynomial& f, int J, int K) {
  if (J < 16) throw std::invalid_argument("bloch_seminorm: J must be >= 16");
  int deg = f.degree();
  if (K == 0)
    K = next_pow2(std::max(4 * (deg + 1), 8));
  else if (K < 4 * deg)
    throw std::invalid_argument("bloch_seminorm: K must be >= 4*degree");
  else
    K = next_pow2(K);

  TaylorPolynomial df = derivative(f);
  double best = 0.0, best_coarse_rad = 0.0, best_coarse_ang = 0.0;
  for (int j = 0; j <= 4 * J; ++j) {
    double r = 1.0 - std::exp2(-0.25 * j);
    double w = 1.0 - r * r;
    std::vector<Complex> vals = circle_values(df.coeffs, r, K);
    double m_all = 0.0, m_even = 0.0;
    for (int k = 0; k < K; ++k) {
      double v = w * std::abs(vals[std::size_t(k)]);
      m_all = std::max(m_all, v);
      if (k % 2 == 0) m_even = std::max(m_even, v);
    }
    best = std::max(best, m_all);
    best_coarse_ang = std::max(best_coarse_ang, m_even);
    if (j <= 4 * (J - 1)) best_coarse_rad = std::max(best_coarse_rad, m_all);
  }

  NormEstimate e;
  e.value = best;
  e.grid.radial_depth = J;
  e.grid.angular_samples = K;
  e.level_values = {std::min(best_coarse_rad, best_coarse_ang), best};
  e.error_indicator =
      best > 0.0
          ? std::max(best - best_coarse_rad, best - best_coarse_ang) / best
          : 0.0;
  return e;
}

std::vector<Complex> mobius_compose(const TaylorPolynomial& f, MobiusPoint p,
                                    int K) {
  if (!(std::abs(p.a) < 1.0))
    throw std::domain_error("mobius_compose: |a| must be < 1");
  if (K <= 0) K = next_pow2(std::max(4 * (f.degree() + 1), 8));
  Complex fa = eval(f, p.a);
  Complex abar = std::conj(p.a);
  std::vector<Complex> out(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    Complex w = std::polar(1.0, 2.0 * M_PI * k / K);
    Complex phi = (p.a - w) / (1.0 - abar * w);
    // phi lies on the unit circle up to rounding; renormalize so eval's
    // domain guard stays quiet
    double m = std::abs(phi);
    if (m > 1.0) phi /= m;
    out[std::size_t(k)] = eval(f, phi) - fa;
  }
  return out;
}

double h2_norm_sq(const std::vector<Complex>& samples) {
  KahanSum acc;
  for (const Complex& s : samples) acc.add(std::norm(s));
  return samples.empty() ? 0.0 : acc.value() / double(samples.size());
}

namespace {

// ||f o phi_a||^2 - |f(a)|^2 through G_{jk} = <phi_a^j, phi_a^k> = a^{j-k}
double gram_h2_sq(const TaylorPolynomial& f, Complex a) {
  const std::vector<Complex>& c = f.coeffs;
  KahanSum diag;
  for (const Complex& x : c) diag.add(std::norm(x));
  Complex R{0.0, 0.0};
  KahanSum cross_re;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    R = a * (c[k + 1] + R);
    Complex term = std::conj(c[k]) * R;
    cross_re.add(term.real());
  }
  double fa2 = std::norm(eval(f, a));
  double v = diag.value() + 2.0 * cross_re.value() - fa2;
  return std::max(v, 0.0);
}

double deepest_radius(const std::vector<MobiusPoint>& grid) {
  double r = 0.0;
  for (const MobiusPoint& p : grid) r = std::max(r, std::abs(p.a));
  return r;
}

}  // namespace

NormEstimate bmoa_seminorm(const TaylorPolynomial& f,
                           const std::vector<MobiusPoint>& a_grid, int K) {
  (void)K;
  std::vector<MobiusPoint> fallback;
  const std::vector<MobiusPoint>* grid = &a_grid;
  if (a_grid.empty()) {
    fallback = mobius_grid(16, 16);
    grid = &fallback;
  }
  double rmax = deepest_radius(*grid);
  double sup = 0.0, sup_inner = 0.0;
  for (const MobiusPoint& p : *grid) {
    if (!(std::abs(p.a) < 1.0))
      throw std::domain_error("bmoa_seminorm: grid points must satisfy |a|<1");
    double v = gram_h2_sq(f, p.a);
    sup = std::max(sup, v);
    if (std::abs(p.a) < rmax - 1e-12) sup_inner = std::max(sup_inner, v);
  }
  NormEstimate e;
  e.value = std::sqrt(sup);
  e.grid.a_grid = int(grid->size());
  e.level_values = {std::sqrt(sup_inner), e.value};
  e.error_indicator =
      e.value > 0.0 ? (e.value - std::sqrt(sup_inner)) / e.value : 0.0;
  return e;
}

NormEstimate qs_seminorm(const TaylorPolynomial& f, double s,
                         const std::vector<MobiusPoint>& a_grid, int m_cap) {
  if (!(s >= 0.0)) throw std::domain_error("qs_seminorm: s must be >= 0");
  std::vector<MobiusPoint> fallback;
  const std::vector<MobiusPoint>* grid = &a_grid;
  if (a_grid.empty()) {
    fallback = mobius_grid(6, 16);
    grid = &fallback;
  }
  const std::vector<Complex>& c = f.coeffs;
  int n = int(c.size());
  const double scale = std::tgamma(s + 1.0) * std::exp2(-s);
  const int hard_cap = m_cap > 0 ? m_cap : (1 << 17);

  // sum_{m>=1} m^{1-s} |c_m(a)|^2 where c(a) are the Taylor coefficients of
  // f o phi_a, built by Horner in phi_a; multiplication by (a-w) and the
  // geometric division by (1-conj(a) w) both leave the leading prefix exact
  auto mode_sum = [&](Complex a, int M) {
    std::vector<Complex> h(static_cast<std::size_t>(M), Complex{0.0, 0.0});
    std::vector<Complex> tmp(static_cast<std::size_t>(M));
    Complex abar = std::conj(a);
    h[0] = c[std::size_t(n) - 1];
    for (int k = n - 2; k >= 0; --k) {
      for (int m = M - 1; m >= 1; --m)
        tmp[std::size_t(m)] = a * h[std::size_t(m)] - h[std::size_t(m) - 1];
      tmp[0] = a * h[0];
      Complex prev{0.0, 0.0};
      for (int m = 0; m < M; ++m) {
        prev = tmp[std::size_t(m)] + abar * prev;
        h[std::size_t(m)] = prev;
      }
      h[0] += c[std::size_t(k)];
    }
    KahanSum total, top;
    for (int m = 1; m < M; ++m) {
      double term = std::pow(double(m), 1.0 - s) * std::norm(h[std::size_t(m)]);
      total.add(term);
      if (4 * m >= 3 * M) top.add(term);
    }
    return std::pair<double, double>{total.value(), top.value()};
  };

  double rmax = deepest_radius(*grid);
  double sup = 0.0, sup_inner = 0.0;
  int used_cap = 0;
  for (const MobiusPoint& p : *grid) {
    if (!(std::abs(p.a) < 1.0))
      throw std::domain_error("qs_seminorm: grid points must satisfy |a|<1");
    int M = std::min(hard_cap, std::max(2 * n, 64));
    double q = 0.0;
    for (;;) {
      auto [total, top] = mode_sum(p.a, M);
      q = total;
      if (top <= 1e-13 * (total + 1e-300) || M >= hard_cap) break;
      M = std::min(2 * M, hard_cap);
    }
    used_cap = std::max(used_cap, M);
    sup = std::max(sup, q);
    if (std::abs(p.a) < rmax - 1e-12) sup_inner = std::max(sup_inner, q);
  }

  NormEstimate e;
  e.value = std::sqrt(scale * sup);
  e.grid.a_grid = int(grid->size());
  e.grid.angular_samples = used_cap;
  e.level_values = {std::sqrt(scale * sup_inner), e.value};
  e.error_indicator =
      e.value > 0.0 ? (e.value - e.level_values[0]) / e.value : 0.0;
  return e;
}

namespace {

struct AreaResult {
  double fine = 0.0;    // integral with all angular samples
  double coarse = 0.0;  // integral with every other angular sample
  int panels = 0;
  int K = 0;
};

// 2 int_0^infty wgt(u) * mean_theta |poly(r e^{i theta})|^p du with
// r = 1 - e^{-u}; panels stop once contributions stay negligible
AreaResult area_integral(const std::vector<Complex>& coeffs, double p,
                         const std::function<double(double)>& wgt,
                         const AreaGrid& g) {
  AreaResult out;
  int K = g.angular > 0
              ? next_pow2(std::max(g.angular, int(coeffs.size())))
              : next_pow2(std::max(4 * int(coeffs.size()), 8));
  out.K = K;
  const GaussRule& gr = gauss_rule(g.gauss_order);
  double cap = g.u_cap > 0.0 ? g.u_cap : 1e9;
  KahanSum fine, coarse;
  int quiet = 0;
  for (int m = 0; m < 100000; ++m) {
    double a = double(m), b = a + 1.0;
    if (a >= cap) break;
    KahanSum pf, pc;
    for (int i = 0; i < g.gauss_order; ++i) {
      double u = 0.5 * (a + b) + 0.5 * gr.x[i];
      double r = -std::expm1(-u);
      double w = 0.5 * gr.w[i] * wgt(u);
      if (w == 0.0) continue;
      std::vector<Complex> vals = circle_values(coeffs, r, K);
      KahanSum sall, seven;
      for (int k = 0; k < K; ++k) {
        double t = std::pow(std::abs(vals[std::size_t(k)]), p);
        sall.add(t);
        if (k % 2 == 0) seven.add(t);
      }
      pf.add(w * sall.value() / K);
      pc.add(w * seven.value() / (K / 2));
    }
    fine.add(pf.value());
    coarse.add(pc.value());
    out.panels = m + 1;
    if (g.u_cap == 0.0) {
      if (std::abs(pf.value()) <= 1e-14 * (std::abs(fine.value()) + 1e-300))
        ++quiet;
      else
        quiet = 0;
      if (quiet >= 3 && m >= 4) break;
    }
  }
  out.fine = 2.0 * fine.value();
  out.coarse = 2.0 * coarse.value();
  return out;
}

}  // namespace

NormEstimate besov_seminorm_area(const TaylorPolynomial& f, double p,
                                 AreaGrid grid) {
  if (!(p > 1.0))
    throw std::domain_error("besov_seminorm_area: p must be > 1");
  TaylorPolynomial df = derivative(f);
  auto wgt = [p](double u) {
    double emu = std::exp(-u);
    if (emu == 0.0) return 0.0;
    double one_minus_r2 = emu * (2.0 - emu);
    double r = -std::expm1(-u);
    return std::pow(one_minus_r2, p - 2.0) * r * emu;
  };
  AreaResult ar = area_integral(df.coeffs, p, wgt, grid);
  NormEstimate e;
  e.value = std::pow(std::max(ar.fine, 0.0), 1.0 / p);
  e.grid.radial_depth = ar.panels;
  e.grid.angular_samples = ar.K;
  double coarse = std::pow(std::max(ar.coarse, 0.0), 1.0 / p);
  e.level_values = {coarse, e.value};
  e.error_indicator =
      e.value > 0.0 ? std::abs(e.value - coarse) / e.value : 0.0;
  return e;
}

NormEstimate besov_seminorm_blocks(const TaylorPolynomial& f, double p) {
  if (!(p > 1.0))
    throw std::domain_error("besov_seminorm_blocks: p must be > 1");
  BlockDecomposition blocks = dyadic_blocks(derivative(f));
  KahanSum acc;
  NormEstimate e;
  double worst_ind = 0.0;
  for (std::size_t nidx = 0; nidx < blocks.blocks.size(); ++nidx) {
    NormEstimate h = hp_norm(blocks.blocks[nidx], p, 1.0);
    if (h.value == 0.0) continue;
    acc.add(std::exp2(-double(nidx) * (p - 1.0)) * std::pow(h.value, p));
    worst_ind = std::max(worst_ind, h.error_indicator);
    e.grid.angular_samples = std::max(e.grid.angular_samples,
                                      h.grid.angular_samples);
  }
  e.value = std::pow(acc.value(), 1.0 / p);
  e.grid.radial_depth = int(blocks.blocks.size());
  e.level_values = {e.value};
  e.error_indicator = worst_ind;
  return e;
}

BergmanPair bergman_block_equivalence(const TaylorPolynomial& f, double p,
                                      double alpha) {
  if (!(p > 1.0))
    throw std::domain_error("bergman_block_equivalence: p must be > 1");
  if (!(alpha > -1.0))
    throw std::domain_error("bergman_block_equivalence: alpha must be > -1");
  auto wgt = [alpha](double u) {
    double emu = std::exp(-u);
    if (emu == 0.0) return 0.0;
    double r = -std::expm1(-u);
    return std::pow(emu, alpha) * r * emu;
  };
  BergmanPair pair;
  pair.q1 = std::max(area_integral(f.coeffs, p, wgt, AreaGrid{}).fine, 0.0);
  BlockDecomposition blocks = dyadic_blocks(f);
  KahanSum acc;
  for (std::size_t nidx = 0; nidx < blocks.blocks.size(); ++nidx) {
    NormEstimate h = hp_norm(blocks.blocks[nidx], p, 1.0);
    if (h.value == 0.0) continue;
    acc.add(std::exp2(-double(nidx) * (alpha + 1.0)) * std::pow(h.value, p));
  }
  pair.q2 = acc.value();
  return pair;
}

}  // namespace hmu
