#include "hmu/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hmu/hilbert_op.hpp"
#include "hmu/spaces.hpp"
#include "hmu/summation.hpp"

namespace hmu {

const char* to_cstring(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string headline_of(const char* key, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.4g", key, v);
  return buf;
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 1.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit out;
  std::size_t n = x.size();
  if (n < 2) return out;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  out.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = y[i] - (out.intercept + out.slope * x[i]);
      ss_res += e * e;
    }
    out.r2 = 1.0 - ss_res / syy;
  }
  return out;
}

double full_block_norm(const TaylorPolynomial& f, double p) {
  double rho = besov_seminorm_blocks(f, p).value;
  return std::pow(std::pow(std::abs(f.coeffs[0]), p) + std::pow(rho, p),
                  1.0 / p);
}

TaylorPolynomial monomial(int k) {
  std::vector<Complex> c(std::size_t(k) + 1, Complex{0.0, 0.0});
  c[std::size_t(k)] = 1.0;
  return TaylorPolynomial(std::move(c));
}

TaylorPolynomial log_partial(int degree) {
  std::vector<Complex> c(std::size_t(degree) + 1, Complex{0.0, 0.0});
  c[0] = std::log(2.0);
  for (int k = 1; k <= degree; ++k) c[std::size_t(k)] = 1.0 / double(k);
  return TaylorPolynomial(std::move(c));
}

TaylorPolynomial signs_member(int degree, double tau, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> c(std::size_t(degree) + 1);
  for (int k = 0; k <= degree; ++k) {
    double mag = std::pow(double(k) + 1.0, -tau);
    c[std::size_t(k)] = ((rng() & 1) ? 1.0 : -1.0) * mag;
  }
  return TaylorPolynomial(std::move(c));
}

// running-max stabilization: increase over the final ten members < 5%
struct Stabilization {
  double final_max = 0.0;
  double decade_increase = 0.0;
  bool stable = false;
};

Stabilization stabilization_of(const std::vector<double>& ratios) {
  Stabilization out;
  std::vector<double> running(ratios.size());
  double m = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    m = std::max(m, ratios[i]);
    running[i] = m;
  }
  out.final_max = m;
  double before = running[running.size() - 11];
  out.decade_increase = (before > 0.0) ? m / before - 1.0 : (m > 0.0 ? 1.0 : 0.0);
  out.stable = out.decade_increase < 0.05;
  return out;
}

void gate(ExperimentReport& r, const std::string& why) {
  r.verdict = Verdict::inconclusive;
  r.notes.push_back(why);
  r.headline = "gated: " + why;
}

}  // namespace

std::vector<TaylorPolynomial> standard_corpus(int degree, unsigned seed) {
  if (degree < 16)
    throw std::invalid_argument("standard_corpus: degree must be >= 16");
  std::vector<TaylorPolynomial> corpus;
  // slowest coefficient decay first so running maxima settle early
  for (double a : {0.6, 1.0, 1.5, 2.0})
    corpus.push_back(logpower_series(a, LogPowerVariant::shifted, degree));
  for (double a : {1.2, 1.5})
    corpus.push_back(logpower_series(a, LogPowerVariant::plain, degree));
  corpus.push_back(log_partial(degree));
  unsigned m = 0;
  for (double tau : {0.5, 1.0, 1.5})
    for (int i = 0; i < 10; ++i) corpus.push_back(signs_member(degree, tau, seed + ++m));
  for (int k : {16, degree / 16, degree - 1}) corpus.push_back(monomial(k));
  return corpus;
}

std::vector<Measure> standard_measure_family() {
  return {
      Measure::atomic({0.0}, {1.0}),
      Measure::atomic({0.5}, {1.0}),
      Measure::atomic({0.9}, {2.0}),
      Measure::atomic({0.1, 0.6, 0.9375}, {0.3, 0.5, 0.2}),
      Measure::lebesgue(1.0),
      Measure::lebesgue(0.25),
      Measure::log_power(1.0),
      Measure::log_power(2.0),
      Measure::log_power(3.0),
      Measure::power_log(2.0, 0.0),
      Measure::power_log(2.0, 1.0),
      Measure::weighted_sum({{0.5, Measure::atomic({0.7}, {1.0})},
                             {0.25, Measure::log_power(1.0)}}),
  };
}

ExperimentReport exp_moment_asymptotics(double beta, int n_lo, int n_hi) {
  ExperimentReport r;
  r.experiment_id = "moment_asymptotics";
  r.parameters["beta"] = num(beta);
  r.parameters["n_lo"] = std::to_string(n_lo);
  r.parameters["n_hi"] = std::to_string(n_hi);
  r.thresholds["extremes_ratio_max"] = 3.0;
  if (beta < 0.0 || n_lo < 2 || n_hi <= n_lo) {
    gate(r, "parameters outside the moment lemma's range");
    return r;
  }
  Measure mu = Measure::log_power(beta);
  r.parameters["measure"] = mu.spec_text();
  MomentSequence ms = moments(mu, n_hi);
  r.metrics["quadrature_error"] = ms.quadrature_error;

  Curve c;
  c.name = "normalized_moments";
  c.parameters["measure"] = mu.spec_text();
  c.parameters["grid"] = "quarter-octave";
  double lo = 0.0, hi = 0.0;
  int prev = 0;
  for (int j = 0;; ++j) {
    double e = std::log2(double(n_lo)) + 0.25 * j;
    double nd = std::exp2(e);
    if (nd > double(n_hi) + 0.5) break;
    int n = int(std::lround(nd));
    if (n == prev) continue;
    prev = n;
    double v = ms.values[std::size_t(n)] * double(n) *
               std::pow(std::log(double(n)), beta);
    c.points.emplace_back(double(n), v);
    lo = (lo == 0.0) ? v : std::min(lo, v);
    hi = std::max(hi, v);
  }
  r.series.push_back(std::move(c));
  double ratio = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  r.metrics["bracket_lo"] = lo;
  r.metrics["bracket_hi"] = hi;
  r.metrics["extremes_ratio"] = ratio;
  r.headline = headline_of("extremes_ratio", ratio);
  r.verdict = ratio <= 3.0 ? Verdict::pass : Verdict::fail;
  return r;
}

ExperimentReport exp_mu_nu_equivalence(const std::vector<Measure>& family,
                                       double s, double alpha) {
  ExperimentReport r;
  r.experiment_id = "mu_nu_equivalence";
  r.parameters["s"] = num(s);
  r.parameters["alpha"] = num(alpha);
  r.parameters["members"] = std::to_string(family.size());
  r.thresholds["suprema_ratio_lo"] = 0.1;
  r.thresholds["suprema_ratio_hi"] = 10.0;
  if (family.empty()) {
    gate(r, "empty measure family");
    return r;
  }

  int disagreements = 0, n_divergent = 0;
  double ratio_lo = 0.0, ratio_hi = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Measure& mu = family[i];
    Measure nu = log_weight(mu, alpha);
    QuantifierReport qm = carleson_quantifier(mu, s, alpha);
    QuantifierReport qn = carleson_quantifier(nu, s, 0.0);
    for (auto [which, q] : {std::pair{"mu", &qm}, std::pair{"nu", &qn}}) {
      Curve c;
      c.name = std::string("q_") + which + "_" + std::to_string(i);
      c.parameters["measure"] =
          (q == &qm) ? mu.spec_text() : nu.spec_text();
      c.parameters["s"] = num(q->s);
      c.parameters["alpha"] = num(q->alpha);
      c.points = q->samples;
      r.series.push_back(std::move(c));
    }
    if (qm.divergent != qn.divergent) ++disagreements;
    if (qm.divergent || qn.divergent) {
      ++n_divergent;
      continue;
    }
    if (qm.supremum > 0.0) {
      double ratio = qn.supremum / qm.supremum;
      ratio_lo = (ratio_lo == 0.0) ? ratio : std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
    }
  }
  r.metrics["disagreements"] = disagreements;
  r.metrics["n_divergent"] = n_divergent;
  r.metrics["ratio_lo"] = ratio_lo;
  r.metrics["ratio_hi"] = ratio_hi;
  bool ratios_ok = ratio_lo == 0.0 || (ratio_lo >= 0.1 && ratio_hi <= 10.0);
  r.verdict =
      (disagreements == 0 && ratios_ok) ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("disagreements", disagreements);
  return r;
}

ExperimentReport exp_counterexample_bp(double p, double beta, double alpha,
                                       int log2_n_max, int degree) {
  if (!(p > 1.0))
    throw std::domain_error("exp_counterexample_bp: p must be > 1");
  if (log2_n_max < 11 || degree < 16)
    throw std::domain_error("exp_counterexample_bp: range too small");
  ExperimentReport r;
  r.experiment_id = "counterexample_bp";
  r.parameters["p"] = num(p);
  r.parameters["beta"] = num(beta);
  r.parameters["alpha"] = num(alpha);
  r.parameters["n_max"] = std::to_string(1 << log2_n_max);
  r.parameters["degree"] = std::to_string(degree);
  r.thresholds["growth_min"] = 1.25;
  r.thresholds["r2_min"] = 0.9;
  r.thresholds["premise_flat_max"] = 0.05;
  if (!(beta > 0.0 && beta <= 1.0 / p)) {
    gate(r, "beta outside (0, 1/p]: theorem scope");
    return r;
  }
  if (!(alpha > 1.0 / p)) {
    gate(r, "alpha <= 1/p: membership premise out of scope");
    return r;
  }

  TaylorPolynomial g = logpower_series(alpha, LogPowerVariant::shifted, degree);

  // membership premise: partial sums of n^{p-1} a_n^p must be Cauchy-flat
  Curve premise;
  premise.name = "premise_partial_sums";
  premise.parameters["alpha"] = num(alpha);
  premise.parameters["degree"] = std::to_string(degree);
  KahanSum ps;
  int next = 16;
  double at_half = 0.0, at_full = 0.0;
  for (int n = 1; n <= degree; ++n) {
    double a = std::abs(g.coeffs[std::size_t(n)]);
    ps.add(std::pow(double(n), p - 1.0) * std::pow(a, p));
    if (n == next || n == degree) {
      premise.points.emplace_back(double(n), ps.value());
      next *= 2;
    }
    if (n == degree / 2) at_half = ps.value();
  }
  at_full = ps.value();
  double premise_increase = at_full / at_half - 1.0;
  r.metrics["premise_increase"] = premise_increase;
  r.series.push_back(std::move(premise));
  if (!(premise_increase < 0.05)) {
    gate(r, "membership premise not flat at this truncation");
    return r;
  }

  // the same measure must clear the beta-log 1-Carleson classification
  Measure mu = Measure::log_power(beta);
  r.parameters["measure"] = mu.spec_text();
  QuantifierReport q = carleson_quantifier(mu, 1.0, beta);
  r.metrics["carleson_sup"] = q.supremum;
  r.metrics["carleson_divergent"] = q.divergent ? 1.0 : 0.0;

  int n_max = 1 << log2_n_max;
  HankelApplication h = hankel_apply(mu, g, n_max);

  Curve sums;
  sums.name = "partial_sums";
  sums.parameters["measure"] = mu.spec_text();
  sums.parameters["degree"] = std::to_string(degree);
  sums.parameters["n_max"] = std::to_string(n_max);
  KahanSum acc;
  std::vector<double> xs, ys;
  bool loglog_model = std::abs(p * beta - 1.0) < 1e-12;
  next = 1 << 10;
  for (int n = 1; n <= n_max; ++n) {
    double b = std::abs(h.output.coeffs[std::size_t(n)]);
    acc.add(std::pow(double(n), p - 1.0) * std::pow(b, p));
    if (n == next) {
      sums.points.emplace_back(double(n), acc.value());
      double ln = std::log(double(n));
      xs.push_back(loglog_model ? std::log(ln)
                                : std::pow(ln, 1.0 - p * beta));
      ys.push_back(acc.value());
      next *= 2;
    }
  }
  r.series.push_back(std::move(sums));

  double growth = ys.back() / ys.front();
  LineFit fit = fit_line(xs, ys);
  r.metrics["growth"] = growth;
  r.metrics["r2"] = fit.r2;
  r.metrics["model_slope"] = fit.slope;
  r.parameters["model"] =
      loglog_model ? "loglog" : "(log N)^" + num(1.0 - p * beta);
  bool ok = !q.divergent && growth >= 1.25 && fit.r2 >= 0.9;
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("growth", growth);
  return r;
}

ExperimentReport exp_necessity_probe(const Measure& mu, double p, double gamma,
                                     std::vector<double> t_grid, int degree) {
  if (!(p > 1.0))
    throw std::domain_error("exp_necessity_probe: p must be > 1");
  ExperimentReport r;
  r.experiment_id = "necessity_probe";
  r.parameters["measure"] = mu.spec_text();
  r.parameters["p"] = num(p);
  r.parameters["gamma"] = num(gamma);
  r.parameters["degree"] = std::to_string(degree);
  r.thresholds["consistency_max"] = 10.0;
  r.thresholds["premise_flat_max"] = 0.05;
  if (!(gamma >= 0.0 && gamma < 1.0 - 1.0 / p)) {
    gate(r, "gamma outside [0, 1-1/p): theorem scope");
    return r;
  }

  double alpha_f = 1.0 - gamma;
  TaylorPolynomial f =
      logpower_series(alpha_f, LogPowerVariant::plain, degree);
  r.parameters["f"] = "logpower plain alpha=" + num(alpha_f);

  KahanSum ps;
  double at_half = 0.0;
  for (int n = 1; n <= degree; ++n) {
    double a = std::abs(f.coeffs[std::size_t(n)]);
    ps.add(std::pow(double(n), p - 1.0) * std::pow(a, p));
    if (n == degree / 2) at_half = ps.value();
  }
  double premise_increase = ps.value() / at_half - 1.0;
  r.metrics["premise_increase"] = premise_increase;
  if (!(premise_increase < 0.05)) {
    gate(r, "membership premise not flat at this truncation");
    return r;
  }

  HankelApplication h = hankel_apply(mu, f, degree);
  double norm = full_block_norm(h.output, p);

  if (t_grid.empty())
    for (int j = 1; j <= 32; ++j) t_grid.push_back(1.0 - std::exp2(-j / 2.0));
  Curve c;
  c.name = "lower_bound";
  c.parameters["measure"] = mu.spec_text();
  c.parameters["gamma"] = num(gamma);
  double lower_max = 0.0;
  for (double t : t_grid) {
    double x = std::log(2.0 / (1.0 - t));
    double v = std::pow(x, gamma) * tail_mass(mu, t) / (1.0 - t);
    c.points.emplace_back(t, v);
    lower_max = std::max(lower_max, v);
  }
  r.series.push_back(std::move(c));
  r.metrics["lower_max"] = lower_max;
  r.metrics["image_norm"] = norm;
  double ratio = (norm > 0.0) ? lower_max / norm
                              : std::numeric_limits<double>::infinity();
  r.metrics["consistency_ratio"] = ratio;
  r.verdict = ratio <= 10.0 ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("consistency_ratio", ratio);
  return r;
}

ExperimentReport exp_sufficiency_probe(double gamma, double p,
                                       const std::vector<TaylorPolynomial>& corpus) {
  if (!(p > 1.0))
    throw std::domain_error("exp_sufficiency_probe: p must be > 1");
  ExperimentReport r;
  r.experiment_id = "sufficiency_probe";
  r.parameters["gamma"] = num(gamma);
  r.parameters["p"] = num(p);
  r.parameters["corpus_size"] = std::to_string(corpus.size());
  r.thresholds["decade_increase_max"] = 0.05;
  if (!(gamma > 1.0)) {
    gate(r, "gamma <= 1: theorem scope");
    return r;
  }
  if (corpus.size() < 11) {
    gate(r, "corpus too small for the final-decade check");
    return r;
  }

  Measure mu = Measure::log_power(gamma);
  r.parameters["measure"] = mu.spec_text();
  int n_out = 0;
  for (const auto& f : corpus) n_out = std::max(n_out, f.degree());
  r.parameters["n_out"] = std::to_string(n_out);

  Curve ratios, running;
  ratios.name = "ratios";
  running.name = "running_max";
  ratios.parameters["measure"] = mu.spec_text();
  ratios.parameters["n_out"] = std::to_string(n_out);
  running.parameters = ratios.parameters;
  std::vector<double> rs;
  double m = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    HankelApplication h = hankel_apply(mu, corpus[i], n_out);
    double ratio =
        full_block_norm(h.output, p) / full_block_norm(corpus[i], p);
    rs.push_back(ratio);
    m = std::max(m, ratio);
    ratios.points.emplace_back(double(i), ratio);
    running.points.emplace_back(double(i), m);
  }
  r.series.push_back(std::move(ratios));
  r.series.push_back(std::move(running));

  Stabilization st = stabilization_of(rs);
  r.metrics["final_max"] = st.final_max;
  r.metrics["decade_increase"] = st.decade_increase;
  r.verdict = st.stable ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("final_max", st.final_max);
  return r;
}

ExperimentReport exp_block_bound(const Measure& mu, double p, int n_lo,
                                 int n_hi, const TaylorPolynomial& f,
                                 const TaylorPolynomial& g) {
  if (!(p > 1.0))
    throw std::domain_error("exp_block_bound: p must be > 1");
  if (n_lo < 3 || n_hi < n_lo)
    throw std::domain_error("exp_block_bound: block range must start at n >= 3");
  ExperimentReport r;
  r.experiment_id = "block_bound";
  r.parameters["measure"] = mu.spec_text();
  r.parameters["p"] = num(p);
  r.parameters["n_lo"] = std::to_string(n_lo);
  r.parameters["n_hi"] = std::to_string(n_hi);
  r.parameters["deg_f"] = std::to_string(f.degree());
  r.parameters["deg_g"] = std::to_string(g.degree());
  r.thresholds["max_over_median"] = 10.0;

  bool f_complex = false;
  for (const Complex& a : f.coeffs)
    if (a.imag() != 0.0) f_complex = true;

  // h_k = g_k * int t^{k+1} f(t) dmu, so order k+1 weighted moments
  MomentSequence wre = weighted_moments(
      mu, g.degree() + 1,
      [&](const QuadPoint& q) { return eval(f, Complex{q.t, 0.0}).real(); });
  MomentSequence wim;
  if (f_complex)
    wim = weighted_moments(mu, g.degree() + 1, [&](const QuadPoint& q) {
      return eval(f, Complex{q.t, 0.0}).imag();
    });
  std::vector<Complex> hc(g.coeffs.size());
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
    Complex w{wre.values[k + 1], f_complex ? wim.values[k + 1] : 0.0};
    hc[k] = g.coeffs[k] * w;
  }
  TaylorPolynomial h(std::move(hc));

  int i_order = (1 << (n_hi - 2)) + 1;
  MomentSequence wabs = weighted_moments(mu, i_order, [&](const QuadPoint& q) {
    return std::abs(eval(f, Complex{q.t, 0.0}));
  });

  BlockDecomposition bh = dyadic_blocks(h);
  BlockDecomposition bg = dyadic_blocks(g);
  Curve c;
  c.name = "implied_constants";
  c.parameters["measure"] = mu.spec_text();
  c.parameters["p"] = num(p);
  std::vector<double> cs;
  for (int n = n_lo; n <= n_hi; ++n) {
    if (n >= int(bg.blocks.size())) {
      r.notes.push_back("block " + std::to_string(n) + " empty, skipped");
      continue;
    }
    double ng = hp_norm(bg.blocks[std::size_t(n)], p, 1.0).value;
    double in = wabs.values[std::size_t((1 << (n - 2)) + 1)];
    if (ng == 0.0 || in == 0.0) {
      r.notes.push_back("block " + std::to_string(n) +
                        " has zero denominator, skipped");
      continue;
    }
    double nh = hp_norm(bh.blocks[std::size_t(n)], p, 1.0).value;
    double cn = nh / (in * ng);
    cs.push_back(cn);
    c.points.emplace_back(double(n), cn);
  }
  r.series.push_back(std::move(c));
  if (cs.empty()) {
    gate(r, "no admissible blocks in range");
    return r;
  }
  std::vector<double> sorted = cs;
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[sorted.size() / 2];
  double cmax = sorted.back();
  r.metrics["max_c"] = cmax;
  r.metrics["median_c"] = median;
  r.metrics["max_over_median"] = cmax / median;
  r.verdict = cmax <= 10.0 * median ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("max_over_median", cmax / median);
  return r;
}

ExperimentReport exp_bmoa_boundedness(const Measure& mu,
                                      const std::vector<TaylorPolynomial>& corpus) {
  ExperimentReport r;
  r.experiment_id = "bmoa_boundedness";
  r.parameters["measure"] = mu.spec_text();
  r.parameters["corpus_size"] = std::to_string(corpus.size());
  r.thresholds["decade_increase_max"] = 0.05;

  Measure nu = log_weight(mu, 1.0);
  QuantifierReport q = carleson_quantifier(nu, 1.0, 0.0);
  r.metrics["nu_carleson_sup"] = q.supremum;
  if (q.divergent) {
    gate(r, "nu = log-weighted mu fails the Carleson precheck");
    return r;
  }
  if (corpus.size() < 11) {
    gate(r, "corpus too small for the final-decade check");
    return r;
  }

  int n_out = 0;
  for (const auto& f : corpus) n_out = std::max(n_out, f.degree());
  r.parameters["n_out"] = std::to_string(n_out);

  Curve ratios, running;
  ratios.name = "ratios";
  running.name = "running_max";
  ratios.parameters["measure"] = mu.spec_text();
  ratios.parameters["n_out"] = std::to_string(n_out);
  running.parameters = ratios.parameters;
  std::vector<double> rs;
  double m = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    double den = bloch_seminorm(corpus[i]).value;
    if (den == 0.0) {
      r.notes.push_back("member " + std::to_string(i) +
                        " is constant, skipped");
      continue;
    }
    HankelApplication h = hankel_apply(mu, corpus[i], n_out);
    double ratio = bmoa_seminorm(h.output).value / den;
    rs.push_back(ratio);
    m = std::max(m, ratio);
    ratios.points.emplace_back(double(i), ratio);
    running.points.emplace_back(double(i), m);
  }
  r.series.push_back(std::move(ratios));
  r.series.push_back(std::move(running));

  Stabilization st = stabilization_of(rs);
  r.metrics["final_max"] = st.final_max;
  r.metrics["decade_increase"] = st.decade_increase;

  // compactness diagnostic: under a vanishing-Carleson weight the monomial
  // ratios should drain toward zero as the frequency grows
  Measure mu_c = Measure::power_log(2.0, 0.0);
  Curve companion;
  companion.name = "companion_monomial_ratios";
  companion.parameters["measure"] = mu_c.spec_text();
  companion.parameters["n_out"] = std::to_string(n_out);
  for (int j = 0; j <= 12; ++j) {
    int k = 1 << j;
    TaylorPolynomial zk = monomial(k);
    HankelApplication h = hankel_apply(mu_c, zk, n_out);
    double ratio = bmoa_seminorm(h.output).value / bloch_seminorm(zk).value;
    companion.points.emplace_back(double(k), ratio);
  }
  r.metrics["companion_first"] = companion.points.front().second;
  r.metrics["companion_last"] = companion.points.back().second;
  r.series.push_back(std::move(companion));

  r.verdict = st.stable ? Verdict::pass : Verdict::fail;
  r.headline = headline_of("final_max", st.final_max);
  return r;
}

std::vector<std::string> experiment_ids() {
  return {"moment_asymptotics", "mu_nu_equivalence", "counterexample_bp",
          "necessity_probe",    "sufficiency_probe", "block_bound",
          "bmoa_boundedness"};
}

ExperimentReport run_experiment(const std::string& id, const LabConfig& cfg) {
  if (id == "moment_asymptotics") return exp_moment_asymptotics(1.0, 64, 65536);
  if (id == "mu_nu_equivalence")
    return exp_mu_nu_equivalence(standard_measure_family(), 1.0, 1.0);
  if (id == "counterexample_bp")
    return exp_counterexample_bp(2.0, 0.4, 0.6, 20, cfg.degree);
  if (id == "necessity_probe") {
    std::vector<double> t_grid;
    for (int j = 1; j <= 2 * cfg.grid_depth; ++j)
      t_grid.push_back(1.0 - std::exp2(-j / 2.0));
    return exp_necessity_probe(Measure::log_power(2.0), 2.0, 0.25, t_grid,
                               cfg.degree);
  }
  if (id == "sufficiency_probe")
    return exp_sufficiency_probe(2.0, 2.0, standard_corpus(cfg.degree, cfg.seed));
  if (id == "block_bound")
    return exp_block_bound(Measure::log_power(2.0), 2.0, 3, 9,
                           signs_member(1 << 10, 1.0, cfg.seed + 101),
                           signs_member(1 << 10, 0.5, cfg.seed + 102));
  if (id == "bmoa_boundedness")
    return exp_bmoa_boundedness(Measure::log_power(2.0),
                                standard_corpus(cfg.degree, cfg.seed));
  throw std::invalid_argument("unknown experiment id: " + id);
}

std::string report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["experiment_id"] = r.experiment_id;
  j["verdict"] = to_cstring(r.verdict);
  j["headline"] = r.headline;
  j["parameters"] = r.parameters;
  j["thresholds"] = r.thresholds;
  j["metrics"] = r.metrics;
  j["notes"] = r.notes;
  auto arr = nlohmann::json::array();
  for (const Curve& c : r.series) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["parameters"] = c.parameters;
    auto pts = nlohmann::json::array();
    for (auto [x, y] : c.points) pts.push_back({x, y});
    jc["points"] = std::move(pts);
    arr.push_back(std::move(jc));
  }
  j["series"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string curve_csv(const Curve& c) {
  std::ostringstream os;
  os << "abscissa,value\n";
  char buf[64];
  for (auto [x, y] : c.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
    os << buf;
  }
  return os.str();
}

void write_report(const ExperimentReport& r, const std::string& dir,
                  bool csv_curves) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / (r.experiment_id + ".json"));
    out << report_json(r);
  }
  if (csv_curves)
    for (const Curve& c : r.series) {
      std::ofstream out(fs::path(dir) /
                        (r.experiment_id + "__" + c.name + ".csv"));
      out << curve_csv(c);
    }
}

std::string suite_summary_table(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %-13s %s\n", "experiment_id", "verdict",
                "headline");
  os << buf;
  for (const ExperimentReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%-22s %-13s %s\n", r.experiment_id.c_str(),
                  to_cstring(r.verdict), r.headline.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace hmu
