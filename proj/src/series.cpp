#include "hmu/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hmu/fft.hpp"
#include "hmu/quadrature.hpp"
#include "hmu/summation.hpp"

namespace hmu {

TaylorPolynomial::TaylorPolynomial(std::vector<Complex> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) coeffs.assign(1, Complex{0.0, 0.0});
}

TaylorPolynomial TaylorPolynomial::from_real(const std::vector<double>& c) {
  std::vector<Complex> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = Complex{c[i], 0.0};
  return TaylorPolynomial(std::move(v));
}

Complex eval(const TaylorPolynomial& f, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::domain_error("eval: |z| must be <= 1");
  Complex acc{0.0, 0.0};
  for (std::size_t i = f.coeffs.size(); i-- > 0;) acc = acc * z + f.coeffs[i];
  return acc;
}

TaylorPolynomial derivative(const TaylorPolynomial& f) {
  if (f.coeffs.size() == 1) return TaylorPolynomial{};
  std::vector<Complex> d(f.coeffs.size() - 1);
  for (std::size_t k = 1; k < f.coeffs.size(); ++k)
    d[k - 1] = double(k) * f.coeffs[k];
  return TaylorPolynomial(std::move(d));
}

TaylorPolynomial dilate(const TaylorPolynomial& f, double r) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::domain_error("dilate: r must lie in (0,1]");
  std::vector<Complex> c(f.coeffs.size());
  double rk = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = f.coeffs[k] * rk;
    rk *= r;
  }
  return TaylorPolynomial(std::move(c));
}

BlockDecomposition dyadic_blocks(const TaylorPolynomial& f) {
  BlockDecomposition d;
  int n = int(f.coeffs.size());
  {
    std::vector<Complex> b0(f.coeffs.begin(),
                            f.coeffs.begin() + std::min(n, 2));
    d.blocks.emplace_back(std::move(b0));
  }
  for (int j = 1; (1 << j) < n; ++j) {
    int lo = 1 << j, hi = std::min(n, 1 << (j + 1));
    std::vector<Complex> b(std::size_t(hi), Complex{0.0, 0.0});
    for (int k = lo; k < hi; ++k) b[std::size_t(k)] = f.coeffs[std::size_t(k)];
    d.blocks.emplace_back(std::move(b));
  }
  return d;
}

TaylorPolynomial reassemble(const BlockDecomposition& d) {
  std::size_t n = 1;
  for (const TaylorPolynomial& b : d.blocks) n = std::max(n, b.coeffs.size());
  std::vector<Complex> c(n, Complex{0.0, 0.0});
  for (const TaylorPolynomial& b : d.blocks)
    for (std::size_t k = 0; k < b.coeffs.size(); ++k) c[k] += b.coeffs[k];
  return TaylorPolynomial(std::move(c));
}

NormEstimate hp_norm(const TaylorPolynomial& f, double p, double r,
                     int samples) {
  if (!(p > 0.0)) throw std::domain_error("hp_norm: p must be > 0");
  if (!(r > 0.0 && r <= 1.0))
    throw std::domain_error("hp_norm: r must lie in (0,1]");
  int base = int(f.coeffs.size());
  if (samples != 0 && samples < 4 * base)
    throw std::invalid_argument("hp_norm: samples must be >= 4*(degree+1)");
  int want = samples != 0 ? samples : (p < 1.0 ? 16 : 4) * base;
  int K = next_pow2(std::max(want, 8));

  std::vector<Complex> vals = circle_values(f.coeffs, r, K);
  KahanSum all, even;
  for (int j = 0; j < K; ++j) {
    double term = std::pow(std::abs(vals[std::size_t(j)]), p);
    all.add(term);
    if (j % 2 == 0) even.add(term);
  }
  double fine = std::pow(all.value() / K, 1.0 / p);
  double coarse = std::pow(even.value() / (K / 2), 1.0 / p);

  NormEstimate e;
  e.value = fine;
  e.grid.angular_samples = K;
  e.level_values = {coarse, fine};
  e.error_indicator = std::abs(fine - coarse) / std::max(fine, 1e-300);
  e.low_accuracy = p < 1.0;
  return e;
}

namespace {

BlockFunctional finish_blocks(std::vector<double> terms) {
  BlockFunctional out;
  out.terms = std::move(terms);
  KahanSum acc;
  for (double t : out.terms) acc.add(t);
  out.value = acc.value();

  std::size_t w = std::min<std::size_t>(10, out.terms.size());
  if (w >= 2) {
    bool positive = true;
    for (std::size_t i = out.terms.size() - w; i < out.terms.size(); ++i)
      if (!(out.terms[i] > 0.0)) positive = false;
    if (positive) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = out.terms.size() - w; i < out.terms.size(); ++i) {
        double x = double(i), y = std::log(out.terms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      double n = double(w);
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      out.divergent = slope >= 0.0;
    }
  }
  return out;
}

template <class Abs2>
BlockFunctional blocks_from_vector(std::size_t size, Abs2 abs2, int n_blocks) {
  if (n_blocks < 1)
    throw std::invalid_argument("anderson_shields: n_blocks must be >= 1");
  if (n_blocks > 40)
    throw std::invalid_argument(
        "anderson_shields: vector form capped at 40 blocks; use the "
        "generator form");
  std::uint64_t need = (std::uint64_t(1) << (n_blocks + 1)) + 1;
  if (size < need)
    throw std::invalid_argument(
        "anderson_shields: lambda must reach index 2^(n_blocks+1)");
  std::vector<double> terms;
  terms.reserve(std::size_t(n_blocks));
  for (int n = 1; n <= n_blocks; ++n) {
    std::uint64_t lo = (std::uint64_t(1) << n) + 1;
    std::uint64_t hi = std::uint64_t(1) << (n + 1);
    KahanSum s;
    for (std::uint64_t k = lo; k <= hi; ++k) s.add(abs2(k));
    terms.push_back(std::sqrt(s.value()));
  }
  return finish_blocks(std::move(terms));
}

}  // namespace

BlockFunctional anderson_shields_functional(const std::vector<Complex>& lambda,
                                            int n_blocks) {
  return blocks_from_vector(
      lambda.size(), [&](std::uint64_t k) { return std::norm(lambda[k]); },
      n_blocks);
}

BlockFunctional anderson_shields_functional(const std::vector<double>& lambda,
                                            int n_blocks) {
  return blocks_from_vector(
      lambda.size(),
      [&](std::uint64_t k) {
        double v = lambda[k];
        return v * v;
      },
      n_blocks);
}

BlockFunctional anderson_shields_functional(
    const std::function<double(double)>& abs2, int n_blocks) {
  if (n_blocks < 1)
    throw std::invalid_argument("anderson_shields: n_blocks must be >= 1");
  std::vector<double> terms;
  terms.reserve(std::size_t(n_blocks));
  const GaussRule& gr = gauss_rule(24);
  for (int n = 1; n <= n_blocks; ++n) {
    double block = 0.0;
    if (n + 1 <= 22) {
      std::uint64_t lo = (std::uint64_t(1) << n) + 1;
      std::uint64_t hi = std::uint64_t(1) << (n + 1);
      KahanSum s;
      for (std::uint64_t k = lo; k <= hi; ++k) s.add(abs2(double(k)));
      block = s.value();
    } else {
      // midpoint continuum form: sum_{k=a}^{b} g(k) ~ int_{a-1/2}^{b+1/2} g,
      // panels in log space
      double a = std::ldexp(1.0, n) + 0.5, b = std::ldexp(1.0, n + 1) + 0.5;
      double va = std::log(a), vb = std::log(b);
      const int panels = 8;
      KahanSum s;
      for (int m = 0; m < panels; ++m) {
        double p0 = va + (vb - va) * m / panels;
        double p1 = va + (vb - va) * (m + 1) / panels;
        double mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
        for (int i = 0; i < 24; ++i) {
          double v = mid + half * gr.x[i];
          double x = std::exp(v);
          s.add(half * gr.w[i] * abs2(x) * x);
        }
      }
      block = s.value();
    }
    terms.push_back(std::sqrt(std::max(block, 0.0)));
  }
  return finish_blocks(std::move(terms));
}

double coef_power_sum(const TaylorPolynomial& f, double p,
                      double weight_exponent) {
  if (!(p > 0.0)) throw std::domain_error("coef_power_sum: p must be > 0");
  KahanSum acc;
  for (std::size_t k = 1; k < f.coeffs.size(); ++k) {
    double a = std::abs(f.coeffs[k]);
    if (a == 0.0) continue;
    acc.add(std::pow(double(k), weight_exponent) * std::pow(a, p));
  }
  return acc.value();
}

double d_alpha_norm(const TaylorPolynomial& f, double alpha) {
  KahanSum acc;
  for (std::size_t n = 0; n < f.coeffs.size(); ++n)
    acc.add(std::pow(double(n) + 1.0, 1.0 - alpha) * std::norm(f.coeffs[n]));
  return std::sqrt(acc.value());
}

TaylorPolynomial logpower_series(double alpha, LogPowerVariant variant,
                                 int N) {
  if (N < 2) throw std::invalid_argument("logpower_series: N must be >= 2");
  std::vector<Complex> c(std::size_t(N) + 1, Complex{0.0, 0.0});
  if (variant == LogPowerVariant::shifted) {
    for (int n = 0; n <= N; ++n)
      c[std::size_t(n)] =
          1.0 / ((n + 1.0) * std::pow(std::log(n + 2.0), alpha));
  } else {
    for (int k = 2; k <= N; ++k)
      c[std::size_t(k)] = 1.0 / (k * std::pow(std::log(double(k)), alpha));
  }
  return TaylorPolynomial(std::move(c));
}

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_csv(const TaylorPolynomial& f, std::ostream& os) {
  os << "index,re,im\n";
  for (std::size_t k = 0; k < f.coeffs.size(); ++k)
    os << k << ',' << fmt_g(f.coeffs[k].real()) << ','
       << fmt_g(f.coeffs[k].imag()) << '\n';
}

void save_csv(const TaylorPolynomial& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_csv: cannot open " + path);
  save_csv(f, os);
}

TaylorPolynomial load_csv(std::istream& is) {
  std::vector<Complex> c;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first && line.find_first_not_of("0123456789.,+-eE \t\r") !=
                     std::string::npos) {
      first = false;
      continue;  // header row
    }
    first = false;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 2)
      throw std::runtime_error("load_csv: bad row '" + line + "'");
    std::size_t idx = std::size_t(std::stoll(fields[0]));
    double re = std::stod(fields[1]);
    double im = fields.size() > 2 && !fields[2].empty() ? std::stod(fields[2])
                                                        : 0.0;
    if (idx >= c.size()) c.resize(idx + 1, Complex{0.0, 0.0});
    c[idx] = Complex{re, im};
  }
  if (c.empty()) throw std::runtime_error("load_csv: no coefficient rows");
  return TaylorPolynomial(std::move(c));
}

TaylorPolynomial load_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_csv: cannot open " + path);
  return load_csv(is);
}

std::string blocks_to_json(const BlockDecomposition& d) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t j = 0; j < d.blocks.size(); ++j) {
    std::size_t start = j == 0 ? 0 : (std::size_t(1) << j);
    const auto& c = d.blocks[j].coeffs;
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t k = start; k < c.size(); ++k)
      coeffs.push_back({c[k].real(), c[k].imag()});
    arr.push_back({{"block", j}, {"start", start}, {"coeffs", coeffs}});
  }
  return arr.dump();
}

}  // namespace hmu
