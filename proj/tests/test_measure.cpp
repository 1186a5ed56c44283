#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hmu/measure.hpp"
#include "test_support.hpp"

using namespace hmu;
using testsupport::oracle_unit_integral;

namespace {

double logw(double t) { return std::log(2.0 / (1.0 - t)); }

std::vector<Measure> family_members() {
  return {
      Measure::lebesgue(1.0),
      Measure::lebesgue(0.25),
      Measure::log_power(1.5),
      Measure::power_log(2.0, 1.0),
      Measure::atomic({0.5}, {1.0}),
      Measure::atomic({0.1, 0.6, 0.9375}, {1.0, 0.5, 0.25}),
      Measure::weighted_sum({{0.5, Measure::lebesgue(1.0)},
                             {1.0, Measure::atomic({0.5}, {0.5})},
                             {0.25, Measure::log_power(2.0)}}),
  };
}

}  // namespace

TEST_CASE("lebesgue moments match 1/(n+1)") {
  MomentSequence ms = moments(Measure::lebesgue(1.0), 4096);
  double worst = 0.0;
  for (int n = 0; n <= 4096; ++n)
    worst = std::max(worst,
                     std::abs(ms.values[size_t(n)] - 1.0 / (n + 1.0)));
  CHECK(worst < 1e-13);
  CHECK(ms.quadrature_error < 1e-10);
}

TEST_CASE("atomic moments are weighted power sums") {
  Measure mu = Measure::atomic({0.0, 0.5, 0.9}, {2.0, 1.0, 0.5});
  MomentSequence ms = moments(mu, 256);
  CHECK(ms.values[0] == doctest::Approx(3.5).epsilon(1e-15));
  for (int n : {1, 3, 17, 256}) {
    double want = 1.0 * std::pow(0.5, n) + 0.5 * std::pow(0.9, n);
    CHECK(std::abs(ms.values[size_t(n)] - want) < 1e-15);
  }
}

TEST_CASE("log weight of lebesgue has mass 1+log2") {
  Measure nu = log_weight(Measure::lebesgue(1.0), 1.0);
  CHECK(nu.total_mass() ==
        doctest::Approx(1.0 + std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("log-power density moment vs independent oracle") {
  Measure mu = Measure::log_power(1.0);
  MomentSequence ms = moments(mu, 128);
  double want = oracle_unit_integral(
      [](double t) { return std::pow(t, 100) / logw(t); });
  CHECK(ms.values[100] == doctest::Approx(want).epsilon(1e-10));
  // stays within a fixed bracket of 1/(n log n)
  double ratio = ms.values[100] * 100.0 * std::log(100.0);
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("moment sequences are completely monotone through third differences") {
  for (const Measure& mu : family_members()) {
    MomentSequence ms = moments(mu, 512);
    double tol = 1e-9 * ms.values[0];
    for (int j = 1; j <= 3; ++j) {
      for (size_t n = 0; n + size_t(j) < ms.values.size(); ++n) {
        double d = 0.0;
        for (int i = 0; i <= j; ++i) {
          double binom = 1.0;
          for (int b = 0; b < i; ++b) binom = binom * (j - b) / (b + 1.0);
          d += ((i % 2) ? -1.0 : 1.0) * binom * ms.values[n + size_t(j - i)];
        }
        double signed_diff = ((j % 2) ? -1.0 : 1.0) * d;
        CHECK(signed_diff >= -tol);
      }
    }
    for (size_t n = 0; n + 1 < ms.values.size(); ++n)
      CHECK(ms.values[n + 1] <= ms.values[n] * (1.0 + 1e-14) + 1e-300);
  }
}

TEST_CASE("weighted moments agree with moments of the log-weighted measure") {
  Measure mu = Measure::log_power(1.5);
  double alpha = 0.75;
  MomentSequence a = weighted_moments(
      mu, 64, [alpha](const QuadPoint& p) { return std::pow(p.log_w, alpha); });
  MomentSequence b = moments(log_weight(mu, alpha), 64);
  for (size_t n = 0; n < a.values.size(); ++n)
    CHECK(a.values[n] == doctest::Approx(b.values[n]).epsilon(1e-11));
}

TEST_CASE("tail plus head reproduces total mass") {
  for (const Measure& mu : family_members()) {
    double total = mu.total_mass();
    for (double t : {0.0, 0.3, 0.5, 0.9, 1.0 - std::ldexp(1.0, -8)}) {
      double sum = tail_mass(mu, t) + head_mass(mu, t);
      CHECK(sum == doctest::Approx(total).epsilon(1e-10));
    }
  }
}

TEST_CASE("atoms at the split point belong to the tail") {
  Measure mu = Measure::atomic({0.5}, {1.0});
  CHECK(tail_mass(mu, 0.5) == doctest::Approx(1.0));
  CHECK(head_mass(mu, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("log-power tail mass obeys the (1-t) log^-beta bound") {
  for (double beta : {0.5, 1.0, 2.0}) {
    Measure mu = Measure::log_power(beta);
    for (double t : {0.1, 0.5, 0.9, 1.0 - std::ldexp(1.0, -12)}) {
      double bound = (1.0 - t) * std::pow(logw(t), -beta);
      CHECK(tail_mass(mu, t) <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("carleson quantifier of lebesgue at s=1 is identically 1") {
  QuantifierReport rep = carleson_quantifier(Measure::lebesgue(1.0), 1.0, 0.0);
  CHECK(rep.supremum == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& [t, q] : rep.samples)
    CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(rep.divergent);
}

TEST_CASE("carleson quantifier flags genuine divergence") {
  // s too large: q doubles per octave
  CHECK(carleson_quantifier(Measure::lebesgue(1.0), 2.0, 0.0).divergent);
  // log divergence: q grows like log(2/(1-t))
  CHECK(carleson_quantifier(Measure::lebesgue(1.0), 1.0, 1.0).divergent);
  // borderline convergent: q -> 1 from below must stay finite
  CHECK_FALSE(carleson_quantifier(Measure::log_power(2.0), 1.0, 2.0).divergent);
  // one log above the borderline diverges
  CHECK(carleson_quantifier(Measure::log_power(2.0), 1.0, 3.0).divergent);
}

TEST_CASE("carleson quantifier of a single atom peaks at the atom") {
  QuantifierReport rep =
      carleson_quantifier(Measure::atomic({0.5}, {1.0}), 1.0, 0.0);
  CHECK(rep.supremum == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.argmax_t == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(rep.divergent);
  CHECK(rep.tail_trend == doctest::Approx(0.0));
}

TEST_CASE("quantifier grid preconditions") {
  CHECK_THROWS_AS(
      carleson_quantifier(Measure::lebesgue(1.0), 1.0, 0.0, GridSpec{10, 4}),
      std::invalid_argument);
  CHECK_THROWS_AS(carleson_quantifier(Measure::lebesgue(1.0), 0.0, 0.0),
                  std::domain_error);
}

TEST_CASE("log weight scales atom weights exactly") {
  Measure mu = Measure::atomic({0.5, 0.9}, {1.0, 2.0});
  Measure nu = log_weight(mu, 2.0);
  CHECK(nu.atoms()[0].w == doctest::Approx(std::pow(logw(0.5), 2.0)));
  CHECK(nu.atoms()[1].w == doctest::Approx(2.0 * std::pow(logw(0.9), 2.0)));
}

TEST_CASE("truncate tail keeps only atoms strictly beyond the cut") {
  Measure mu = Measure::atomic({0.3, 0.8}, {1.0, 1.0});
  Measure cut = truncate_tail(mu, 0.5);
  REQUIRE(cut.atoms().size() == 1);
  CHECK(cut.atoms()[0].t == doctest::Approx(0.8));
  // an atom exactly at the cut is dropped ((r,1) is open at r)
  CHECK(truncate_tail(mu, 0.3).atoms().size() == 1);
}

TEST_CASE("truncated density mass equals tail mass at the cut") {
  Measure mu = Measure::log_power(1.0);
  for (double r : {0.25, 0.75, 1.0 - std::ldexp(1.0, -10)}) {
    CHECK(truncate_tail(mu, r).total_mass() ==
          doctest::Approx(tail_mass(mu, r)).epsilon(1e-10));
  }
}

TEST_CASE("vanishing diagnostic separates vanishing from flat families") {
  // log-weighted logpower family: sup of the restricted quantifier decays,
  // but only logarithmically, so the curve must fall without the flag firing
  Measure nu = log_weight(Measure::log_power(2.0), 1.0);
  VanishingDiagnostic vd = vanishing_diagnostic(nu);
  for (std::size_t i = 0; i + 1 < vd.curve.size(); ++i)
    CHECK(vd.curve[i + 1].second <= vd.curve[i].second * (1.0 + 1e-9));
  CHECK(vd.curve.back().second < vd.curve.front().second);

  // a 2-Carleson density probed at s=1: sup ~ (1-r), halves per level
  VanishingDiagnostic fast = vanishing_diagnostic(Measure::power_log(2.0, 0.0));
  CHECK(fast.vanishing);

  // finitely many atoms: restriction is eventually empty
  VanishingDiagnostic atom =
      vanishing_diagnostic(Measure::atomic({0.5, 0.9}, {1.0, 2.0}));
  CHECK(atom.vanishing);
  CHECK(atom.curve.back().second == 0.0);

  // restrictions of Lebesgue keep sup-quantifier 1 at every depth
  VanishingDiagnostic flat = vanishing_diagnostic(Measure::lebesgue(1.0));
  CHECK_FALSE(flat.vanishing);
  for (const auto& [r, q] : flat.curve)
    CHECK(q == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("embedding probe closed forms") {
  std::vector<double> grid = embedding_grid(16);
  double probe = embedding_probe(Measure::lebesgue(1.0), grid);
  CHECK(probe == doctest::Approx(1.0 + grid.back()).epsilon(1e-9));
  CHECK(probe < 2.0);
  CHECK(probe > 1.0);

  Measure atom = Measure::atomic({0.5}, {1.0});
  double manual = 0.0;
  for (double a : grid) {
    double d = 1.0 - 0.5 * a;
    manual = std::max(manual, (1.0 - a * a) / (d * d));
  }
  CHECK(embedding_probe(atom, grid) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("generalized moment bracket for log-carleson densities") {
  // mu with tail ~ (1-t)^s (log 2/(1-t))^{-beta}: k^s (log k)^{beta-alpha}
  // times the alpha-log-weighted moment stays in a narrow bracket.
  struct Case {
    double s, beta, alpha;
  };
  for (Case c : {Case{2.0, 1.0, 0.0}, Case{1.0, 2.0, 1.0}}) {
    Measure mu = Measure::power_log(c.s, c.beta);
    Measure nu = log_weight(mu, c.alpha);
    double lo = 1e300, hi = 0.0;
    for (int k = 64; k <= 65536; k *= 4) {
      double wm = integrate(nu, [k](const QuadPoint& p) {
        return std::pow(p.t, double(k));
      });
      double scaled = wm * std::pow(double(k), c.s) *
                      std::pow(std::log(double(k)), c.beta - c.alpha);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CHECK(hi / lo <= 3.0);
  }
}

TEST_CASE("divergent integrand is flagged, not silently truncated") {
  TryIntegral r = try_integrate(Measure::lebesgue(1.0), [](const QuadPoint& p) {
    return 1.0 / (p.one_minus_t * p.one_minus_t);
  });
  CHECK(r.diverged);
  CHECK_THROWS_AS(integrate(Measure::lebesgue(1.0),
                            [](const QuadPoint& p) {
                              return 1.0 / (p.one_minus_t * p.one_minus_t);
                            }),
                  DivergenceError);
}

TEST_CASE("measure spec text round-trips losslessly") {
  std::vector<Measure> ms = family_members();
  ms.push_back(log_weight(Measure::log_power(0.5), 2.0));  // positive log power
  ms.push_back(truncate_tail(Measure::power_log(2.0, 1.0), 0.75));
  ms.push_back(log_weight(
      Measure::weighted_sum({{2.0, Measure::lebesgue(0.5)},
                             {1.0, Measure::atomic({0.25}, {3.0})}}),
      1.0));
  for (const Measure& mu : ms) {
    std::string text = mu.spec_text();
    Measure back = Measure::parse(text);
    CHECK(back.spec_text() == text);
    MomentSequence a = moments(mu, 16), b = moments(back, 16);
    for (size_t n = 0; n < a.values.size(); ++n)
      CHECK(a.values[n] == doctest::Approx(b.values[n]).epsilon(1e-14));
  }
}

TEST_CASE("nested sum specs parse with indentation") {
  std::string text =
      "# two-level nesting\n"
      "kind=sum\n"
      "  coefficient=2\n"
      "  kind=sum\n"
      "    coefficient=0.5\n"
      "    kind=lebesgue\n"
      "    scale=1\n"
      "\n"
      "    coefficient=1\n"
      "    kind=atomic\n"
      "    points=0.5\n"
      "    weights=1\n"
      "\n"
      "  coefficient=1\n"
      "  kind=logpower\n"
      "  beta=1\n";
  Measure mu = Measure::parse(text);
  CHECK(mu.atoms().size() == 1);
  CHECK(mu.atoms()[0].w == doctest::Approx(2.0));
  CHECK(mu.densities().size() == 2);
  double mass = mu.total_mass();
  double want = 2.0 * (0.5 * 1.0 + 1.0) +
                Measure::log_power(1.0).total_mass();
  CHECK(mass == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("spec parse rejects malformed input") {
  CHECK_THROWS(Measure::parse("kind=atomic\npoints=1.5\nweights=1\n"));
  CHECK_THROWS(Measure::parse("kind=atomic\npoints=0.5\nweights=-1\n"));
  CHECK_THROWS(Measure::parse("kind=mystery\n"));
  CHECK_THROWS(Measure::parse("kind=lebesgue\nscale=0\n"));
  CHECK_THROWS(Measure::parse("kind=powerlog\ns=0.5\nalpha=0\n"));
}

TEST_CASE("constructor domain errors") {
  CHECK_THROWS_AS(Measure::atomic({0.5}, {0.0}), std::domain_error);
  CHECK_THROWS_AS(Measure::atomic({1.0}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(Measure::log_power(-0.5), std::domain_error);
  CHECK_THROWS_AS(Measure::power_log(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(log_weight(Measure::lebesgue(1.0), -1.0), std::domain_error);
}
