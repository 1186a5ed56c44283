#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmu/measure.hpp"
#include "hmu/series.hpp"

namespace hmu {

enum class Verdict { pass, fail, inconclusive };
const char* to_cstring(Verdict v);

struct Curve {
  std::string name;
  std::map<std::string, std::string> parameters;  // seed, grids, truncation
  std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
  std::string experiment_id;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> thresholds;  // harness constants in force
  std::map<std::string, double> metrics;     // measured quantities
  std::vector<Curve> series;
  Verdict verdict = Verdict::inconclusive;
  std::string headline;  // one-line summary figure for the suite table
  std::vector<std::string> notes;
};

// Truncation and reproducibility defaults; every experiment records the
// values it actually used.
struct LabConfig {
  int degree = 1 << 12;
  unsigned seed = 2026;
  int grid_depth = 16;
};

// Fixed seeded corpus: signed 1/k^tau polynomials (tau = 0.5, 1, 1.5, ten
// seeds each, heaviest tails first), log-family members, monomials.
std::vector<TaylorPolynomial> standard_corpus(int degree, unsigned seed);

// Twelve measures spanning atoms, flat and log-power densities, a
// power-log pair, and a mixed sum; used by the equivalence experiment.
std::vector<Measure> standard_measure_family();

// mu_n * n * (log n)^beta on a log-spaced grid for mu = log_power(beta);
// pass iff bracket extremes ratio <= 3.
ExperimentReport exp_moment_asymptotics(double beta, int n_lo = 64,
                                        int n_hi = 65536);

// For each member: classify mu as alpha-log s-Carleson and nu = log-weighted
// mu as plain s-Carleson; pass iff classifications agree everywhere and
// finite suprema ratios stay inside [1/10, 10].
ExperimentReport exp_mu_nu_equivalence(const std::vector<Measure>& family,
                                       double s, double alpha);

// Hankel action of log_power(beta) on the shifted log-power series; partial
// sums S_N = sum n^{p-1} b_n^p at dyadic N up to 2^log2_n_max must grow
// >= 25% and track (log N)^{1-p beta} with R^2 >= 0.9 while the measure
// itself passes the beta-log 1-Carleson classification.
ExperimentReport exp_counterexample_bp(double p, double beta, double alpha,
                                       int log2_n_max = 20, int degree = 1 << 12);

// Lower-bound functional (log 2/(1-t))^gamma mu([t,1))/(1-t) on a t-grid
// against the block Besov norm of the Hankel image; consistency constant 10.
ExperimentReport exp_necessity_probe(const Measure& mu, double p, double gamma,
                                     std::vector<double> t_grid = {},
                                     int degree = 1 << 12);

// Ratio of full block-Besov norms image/preimage for mu = log_power(gamma)
// over the corpus; pass iff the running maximum's final-decade increase
// stays under 5%.
ExperimentReport exp_sufficiency_probe(double gamma, double p,
                                       const std::vector<TaylorPolynomial>& corpus);

// Implied constant of the block inequality ||Delta_n h|| <=
// C (int t^{2^{n-2}+1}|f| dmu) ||Delta_n g|| with h_k = g_k int t^{k+1} f dmu;
// pass iff max C_n <= 10 x median over the block range.
ExperimentReport exp_block_bound(const Measure& mu, double p, int n_lo,
                                 int n_hi, const TaylorPolynomial& f,
                                 const TaylorPolynomial& g);

// BMOA-over-Bloch seminorm ratios of the Hankel action across the corpus,
// gated on nu = log_weight(mu, 1) being Carleson; companion run with a
// vanishing-Carleson measure records monomial ratio decay.
ExperimentReport exp_bmoa_boundedness(const Measure& mu,
                                      const std::vector<TaylorPolynomial>& corpus);

std::vector<std::string> experiment_ids();
// Runs one experiment by id with suite defaults drawn from cfg.
ExperimentReport run_experiment(const std::string& id, const LabConfig& cfg);

std::string report_json(const ExperimentReport& r);
std::string curve_csv(const Curve& c);
// Writes <dir>/<id>.json and, when csv_curves, <dir>/<id>__<curve>.csv.
void write_report(const ExperimentReport& r, const std::string& dir,
                  bool csv_curves);
std::string suite_summary_table(const std::vector<ExperimentReport>& reports);

}  // namespace hmu
