#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmu/hilbert_op.hpp"
#include "hmu/lab.hpp"
#include "hmu/measure.hpp"
#include "hmu/series.hpp"
#include "hmu/spaces.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// empty dir means stdout, otherwise <dir>/<name>
void emit(const std::string& dir, const std::string& name,
          const std::string& text) {
  if (dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name);
  out << text;
  std::cerr << "wrote " << (fs::path(dir) / name).string() << "\n";
}

std::string rows_csv(const std::string& header,
                     const std::vector<std::pair<double, double>>& rows) {
  std::ostringstream os;
  os << header << "\n";
  char buf[80];
  for (auto [a, b] : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a, b);
    os << buf;
  }
  return os.str();
}

json grid_json(const hmu::GridMeta& g) {
  return {{"radial_depth", g.radial_depth},
          {"angular_samples", g.angular_samples},
          {"a_grid", g.a_grid}};
}

json estimate_json(const hmu::NormEstimate& e) {
  return {{"value", e.value},
          {"grid", grid_json(e.grid)},
          {"error_indicator", e.error_indicator},
          {"level_values", e.level_values},
          {"low_accuracy", e.low_accuracy}};
}

std::string poly_csv(const hmu::TaylorPolynomial& f) {
  std::ostringstream os;
  hmu::save_csv(f, os);
  return os.str();
}

int run_moments(const std::string& measure_path, int max_order,
                const std::string& format, const std::string& out) {
  hmu::Measure mu = hmu::Measure::load(measure_path);
  hmu::MomentSequence ms = hmu::moments(mu, max_order);
  if (format == "json") {
    json j = {{"measure", mu.spec_text()},
              {"max_order", max_order},
              {"quadrature_error", ms.quadrature_error},
              {"values", ms.values}};
    emit(out, "moments.json", j.dump(2) + "\n");
  } else {
    std::vector<std::pair<double, double>> rows;
    for (std::size_t n = 0; n < ms.values.size(); ++n)
      rows.emplace_back(double(n), ms.values[n]);
    emit(out, "moments.csv", rows_csv("n,value", rows));
  }
  return 0;
}

int run_carleson(const std::string& measure_path, double s, double alpha,
                 int depth, const std::string& format, const std::string& out) {
  hmu::Measure mu = hmu::Measure::load(measure_path);
  hmu::GridSpec grid;
  grid.depth = depth;
  hmu::QuantifierReport q = hmu::carleson_quantifier(mu, s, alpha, grid);
  if (format == "json") {
    json j = {{"measure", mu.spec_text()},
              {"s", q.s},
              {"alpha", q.alpha},
              {"supremum", q.supremum},
              {"argmax_t", q.argmax_t},
              {"tail_trend", q.tail_trend},
              {"divergent", q.divergent},
              {"samples", q.samples}};
    emit(out, "carleson.json", j.dump(2) + "\n");
  } else {
    emit(out, "carleson.csv", rows_csv("t,quantifier", q.samples));
    std::fprintf(stderr, "supremum=%.17g argmax_t=%.17g divergent=%d\n",
                 q.supremum, q.argmax_t, q.divergent ? 1 : 0);
  }
  return 0;
}

int run_apply(const std::string& measure_path, const std::string& in_path,
              int n_out, const std::string& format, const std::string& out) {
  hmu::Measure mu = hmu::Measure::load(measure_path);
  hmu::TaylorPolynomial f = hmu::load_csv_file(in_path);
  if (n_out < 0) n_out = f.degree();
  hmu::HankelApplication h = hmu::hankel_apply(mu, f, n_out);
  if (format == "json") {
    auto coeffs = json::array();
    for (const hmu::Complex& c : h.output.coeffs)
      coeffs.push_back({c.real(), c.imag()});
    json j = {{"measure", mu.spec_text()},
              {"n_out", n_out},
              {"coeffs", coeffs},
              {"absolute_row_sums", h.absolute_row_sums}};
    emit(out, "apply.json", j.dump(2) + "\n");
  } else {
    emit(out, "apply.csv", poly_csv(h.output));
  }
  return 0;
}

int run_agree(const std::string& measure_path, const std::string& in_path,
              int n_out, int depth, const std::string& out) {
  hmu::Measure mu = hmu::Measure::load(measure_path);
  hmu::TaylorPolynomial f = hmu::load_csv_file(in_path);
  if (n_out < 0) n_out = 4 * (f.degree() + 1);
  const int angles = 16;
  std::vector<hmu::Complex> z_grid = {hmu::Complex{0.0, 0.0}};
  for (int j = 1; j <= depth; ++j) {
    double r = 1.0 - std::exp2(-j / 4.0);
    for (int k = 0; k < angles; ++k) {
      double th = 2.0 * 3.14159265358979323846 * k / angles;
      z_grid.push_back(r * hmu::Complex{std::cos(th), std::sin(th)});
    }
  }
  hmu::AgreementReport rep = hmu::agreement_check(mu, f, z_grid, n_out);
  json j = {{"measure", mu.spec_text()},
            {"n_out", rep.n_out},
            {"max_diff", rep.max_diff},
            {"argmax_z", {rep.argmax_z.real(), rep.argmax_z.imag()}},
            {"tail_bound", rep.tail_bound},
            {"within_tail_bound", rep.max_diff <= std::max(1e-8, rep.tail_bound)},
            {"grid", {{"radial_depth", depth}, {"angles", angles}}}};
  emit(out, "agree.json", j.dump(2) + "\n");
  return 0;
}

int run_norms(const std::string& in_path, const std::string& space, double p,
              double s, int depth, const std::string& out) {
  hmu::TaylorPolynomial f = hmu::load_csv_file(in_path);
  hmu::NormEstimate e;
  if (space == "bloch") {
    e = hmu::bloch_seminorm(f, depth);
  } else if (space == "bmoa") {
    e = hmu::bmoa_seminorm(f, hmu::mobius_grid(depth));
  } else if (space == "qs") {
    e = hmu::qs_seminorm(f, s, hmu::mobius_grid(depth));
  } else if (space == "besov_area") {
    e = hmu::besov_seminorm_area(f, p);
  } else {
    e = hmu::besov_seminorm_blocks(f, p);
  }
  json j = estimate_json(e);
  j["space"] = space;
  if (space == "qs") j["s"] = s;
  if (space.rfind("besov", 0) == 0) j["p"] = p;
  emit(out, "norms.json", j.dump(2) + "\n");
  return 0;
}

int run_reports(const std::vector<std::string>& ids, const hmu::LabConfig& cfg,
                const std::string& out) {
  std::vector<hmu::ExperimentReport> reports;
  for (const std::string& id : ids) {
    reports.push_back(hmu::run_experiment(id, cfg));
    hmu::write_report(reports.back(), out, true);
  }
  std::cout << hmu::suite_summary_table(reports);
  for (const hmu::ExperimentReport& r : reports)
    if (r.verdict == hmu::Verdict::fail) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Hilbert operator laboratory"};
  app.require_subcommand(1);

  std::string measure_path, in_path, out_dir, format = "csv";
  std::string space = "bloch", experiment_id, report_dir = "reports";
  double p = 2.0, s = 1.0, alpha = 0.0;
  int moment_order = 64, n_out = -1, t_depth = 30, z_depth = 13, a_depth = 16;
  hmu::LabConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_measure) {
    if (needs_measure)
      sub->add_option("--measure", measure_path, "measure spec file")
          ->required()
          ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: stdout)");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_in = [&](CLI::App* sub) {
    sub->add_option("--in", in_path, "polynomial CSV (index,re,im)")
        ->required()
        ->check(CLI::ExistingFile);
  };

  CLI::App* c_moments = app.add_subcommand("moments", "moment sequence of a measure");
  add_common(c_moments, true);
  c_moments->add_option("--degree", moment_order, "highest moment order");

  CLI::App* c_carleson =
      app.add_subcommand("carleson", "Carleson quantifier curve and supremum");
  add_common(c_carleson, true);
  c_carleson->add_option("--s", s, "Carleson exponent");
  c_carleson->add_option("--alpha", alpha, "logarithmic exponent");
  c_carleson->add_option("--grid-depth", t_depth, "octave depth of the t grid");

  CLI::App* c_apply =
      app.add_subcommand("apply", "apply the Hankel operator to a polynomial");
  add_common(c_apply, true);
  add_in(c_apply);
  c_apply->add_option("--degree", n_out, "output truncation (default: input degree)");

  CLI::App* c_agree = app.add_subcommand(
      "agree", "series vs integral agreement diagnostic");
  add_common(c_agree, true);
  add_in(c_agree);
  c_agree->add_option("--degree", n_out, "series truncation (default: 4x input)");
  c_agree->add_option("--grid-depth", z_depth, "radial levels of the z grid");

  CLI::App* c_norms = app.add_subcommand("norms", "seminorm estimate of a polynomial");
  add_common(c_norms, false);
  add_in(c_norms);
  c_norms->add_option("--space", space, "estimator")
      ->check(CLI::IsMember({"bloch", "bmoa", "qs", "besov_area", "besov_blocks"}));
  c_norms->add_option("--p", p, "Besov integrability index");
  c_norms->add_option("--s", s, "Qs exponent");
  c_norms->add_option("--grid-depth", a_depth, "radial levels of the a grid");

  auto add_lab = [&](CLI::App* sub) {
    sub->add_option("--degree", cfg.degree, "corpus truncation degree");
    sub->add_option("--seed", cfg.seed, "corpus seed");
    sub->add_option("--grid-depth", cfg.grid_depth, "probe grid depth");
    sub->add_option("--out", report_dir, "report directory");
  };
  CLI::App* c_exp = app.add_subcommand("experiment", "run one experiment");
  c_exp->add_option("id", experiment_id, "experiment id")
      ->required()
      ->check(CLI::IsMember(hmu::experiment_ids()));
  add_lab(c_exp);
  CLI::App* c_suite = app.add_subcommand("suite", "run every experiment");
  add_lab(c_suite);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_moments)
      return run_moments(measure_path, moment_order, format, out_dir);
    if (*c_carleson)
      return run_carleson(measure_path, s, alpha, t_depth, format, out_dir);
    if (*c_apply) return run_apply(measure_path, in_path, n_out, format, out_dir);
    if (*c_agree)
      return run_agree(measure_path, in_path, n_out, z_depth, out_dir);
    if (*c_norms) return run_norms(in_path, space, p, s, a_depth, out_dir);
    if (*c_exp) return run_reports({experiment_id}, cfg, report_dir);
    if (*c_suite) return run_reports(hmu::experiment_ids(), cfg, report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
