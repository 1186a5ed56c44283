#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmu/quadrature.hpp"

namespace hmu {

struct Atom {
  double t;
  double w;
};

// General density component on (cut, 1):
//   coef * (1-t)^{s-1} * (log(2/(1-t)))^{log_pow} dt
// The public constructors only expose the restricted parameter ranges; the
// signed log_pow exists so log-weighted measures stay in the family.
struct DensityComponent {
  double coef = 1.0;
  double s = 1.0;
  double log_pow = 0.0;
  double cut = 0.0;
};

// Finite positive Borel measure on [0,1): finitely many atoms plus finitely
// many density components of the family above.
class Measure {
 public:
  Measure() = default;

  static Measure atomic(std::vector<double> points, std::vector<double> weights);
  static Measure lebesgue(double scale = 1.0);
  // density (log(2/(1-t)))^{-beta} dt, beta >= 0
  static Measure log_power(double beta, double scale = 1.0);
  // density (1-t)^{s-1} (log(2/(1-t)))^{-alpha} dt, s >= 1, alpha >= 0
  static Measure power_log(double s, double alpha, double scale = 1.0);
  static Measure weighted_sum(const std::vector<std::pair<double, Measure>>& parts);
  // General family density with signed log exponent; arises from log_weight
  // round-trips. Prefer the named constructors.
  static Measure general_density(double scale, double s, double log_pow,
                                 double cut = 0.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityComponent>& densities() const { return densities_; }
  bool empty() const { return atoms_.empty() && densities_.empty(); }

  double total_mass() const;

  // Canonical text form; parse(spec_text()) reproduces the measure exactly.
  std::string spec_text() const;
  static Measure parse(const std::string& text);
  static Measure load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  friend Measure log_weight(const Measure& mu, double alpha);
  friend Measure truncate_tail(const Measure& mu, double r);

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityComponent> densities_;
};

// nu with d(nu) = (log(2/(1-t)))^alpha d(mu), alpha >= 0.
Measure log_weight(const Measure& mu, double alpha);

// Restriction of mu to (r,1).
Measure truncate_tail(const Measure& mu, double r);

// mu([t,1)) and mu([0,t)).
double tail_mass(const Measure& mu, double t);
double head_mass(const Measure& mu, double t);

// Integrals against mu. g receives prepared points so that 1-t and
// log(2/(1-t)) are exact near the endpoint. Throws DivergenceError when the
// quadrature detects a non-convergent tail.
double integrate(const Measure& mu,
                 const std::function<double(const QuadPoint&)>& g,
                 double rel_tol = 1e-12);
std::complex<double> integrate_complex(
    const Measure& mu,
    const std::function<std::complex<double>(const QuadPoint&)>& g,
    double rel_tol = 1e-12);

struct TryIntegral {
  double value = 0.0;
  bool diverged = false;
};
TryIntegral try_integrate(const Measure& mu,
                          const std::function<double(const QuadPoint&)>& g,
                          double rel_tol = 1e-12);

// Integral over [t0, 1) (atoms at t0 included).
double tail_integrate(const Measure& mu, double t0,
                      const std::function<double(const QuadPoint&)>& g,
                      double rel_tol = 1e-12);

struct MomentSequence {
  std::vector<double> values;  // values[n] = integral of t^n, n = 0..max_order
  std::string source;          // measure description
  double quadrature_error = 0.0;
};

// mu_n for n = 0..max_order, all orders from one shared node set.
MomentSequence moments(const Measure& mu, int max_order);

// integral of t^n phi(t) d(mu), n = 0..max_order.
MomentSequence weighted_moments(const Measure& mu, int max_order,
                                const std::function<double(const QuadPoint&)>& phi);

// Radially exponential sampling grid t_j = 1 - 2^{-j/per_octave},
// j = 0..per_octave*depth.
struct GridSpec {
  int depth = 30;
  int per_octave = 4;
};
std::vector<double> carleson_grid(const GridSpec& grid);

struct QuantifierReport {
  double s = 1.0;
  double alpha = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t_j, q(t_j))
  double supremum = 0.0;
  double argmax_t = 0.0;
  double tail_trend = 0.0;  // per-octave change over the last octave
  bool divergent = false;
};

// q(t) = mu([t,1)) (log(2/(1-t)))^alpha / (1-t)^s sampled on the grid.
// divergent is set when the samples increase strictly across the final three
// octaves and their log-log slope against log(2/(1-t)) is >= 0.5.
QuantifierReport carleson_quantifier(const Measure& mu, double s, double alpha,
                                     GridSpec grid = {});

// max over a_grid of integral of (1-a^2)/(1-a t)^2 d(mu), the H^1 test
// kernel family (each kernel has unit H^1 norm).
double embedding_probe(const Measure& mu, std::span<const double> a_grid);
std::vector<double> embedding_grid(int depth = 16);

struct VanishingDiagnostic {
  bool vanishing = false;
  std::vector<std::pair<double, double>> curve;  // (r_j, N(mu restricted))
};

// Tracks sup-quantifier of the restriction to (r_j, 1), r_j = 1 - 2^{-j}.
// vanishing = monotone decrease over the final window (8 steps) and last
// value < 1% of the first.
VanishingDiagnostic vanishing_diagnostic(const Measure& mu, double s = 1.0,
                                         double alpha = 0.0, int depth = 16,
                                         GridSpec grid = {});

}  // namespace hmu
