#include <doctest.h>

#include <cmath>

#include "gelfand/bessel.hpp"
#include "gelfand/bifurcation.hpp"
#include "gelfand/error.hpp"
#include "gelfand/quadrature.hpp"

using namespace gelfand;

namespace {

// min over the common window of v(., gamma) - v(., beta), by interpolation
double direct_min_gap(const ProblemConfig& cfg, double beta, double gamma) {
  const ShootResult a = integrate_ivp(cfg, beta), b = integrate_ivp(cfg, gamma);
  const HermiteInterpolant va(a.profile.radii, a.profile.values, a.profile.derivs);
  const HermiteInterpolant vb(b.profile.radii, b.profile.values, b.profile.derivs);
  double m = INFINITY;
  for (int i = 0; i <= 4000; ++i) {
    const double r = cfg.r_start * std::pow(1.0 / cfg.r_start, i / 4000.0);
    m = std::min(m, vb(std::min(r, 1.0)) - va(std::min(r, 1.0)));
  }
  return m;
}

}  // namespace

TEST_CASE("zero number below the singular solution") {
  ProblemConfig cfg(3, Weight::constant(3));
  const RadialProfile sing = integrate_singular(cfg).profile;
  CHECK(zero_number(cfg, -5.0, sing) == 0);
}

TEST_CASE("zero number grows along the Type I branch") {
  ProblemConfig cfg(3, Weight::constant(3));
  const RadialProfile sing = integrate_singular(cfg).profile;
  const int z10 = zero_number(cfg, 10.0, sing), z25 = zero_number(cfg, 25.0, sing);
  CHECK(z25 >= z10 + 2);
  CHECK(z10 >= 1);
}

TEST_CASE("no intersections with V_* at N = 10, a = a_H") {
  ProblemConfig cfg(10, Weight::ah(hardy_constant(), 10));
  const RadialProfile sing = integrate_singular(cfg).profile;
  for (double beta : {1.0, 5.0, 15.0, 25.0, 35.0}) CHECK(zero_number(cfg, beta, sing) == 0);
}

TEST_CASE("separation: identical profiles give zero gap") {
  ProblemConfig cfg(10, Weight::ah(hardy_constant(), 10));
  const SeparationResult s = check_separation(cfg, hardy_constant(), 3.0, 3.0);
  CHECK(s.min_gap_v == 0.0);
}

TEST_CASE("separation at N = 10 below the critical weight") {
  const double H = hardy_constant();
  ProblemConfig cfg(10, Weight::ah(H, 10));
  const SeparationResult s = check_separation(cfg, H, 2.0, 5.0);
  CHECK(s.r_h == 1.0);
  CHECK(s.hypotheses_checked);
  CHECK(s.min_gap_v > 0.0);
  CHECK(s.min_gap_weighted > -1e-10);
  CHECK(s.min_gap_v == doctest::Approx(direct_min_gap(cfg, 2.0, 5.0)).epsilon(1e-6));

  ProblemConfig low(10, Weight::ah(5.78, 10));
  const SeparationResult t = check_separation(low, H, 2.0, 5.0);
  CHECK(t.min_gap_v > 0.0);
  CHECK(t.min_gap_weighted > 0.0);

  // r_h = sqrt(H / h) when h > H
  ProblemConfig big(10, Weight::ah(3.0, 10));
  CHECK(check_separation(big, 20.0, 1.0, 2.0).r_h == doctest::Approx(std::sqrt(H / 20.0)).epsilon(1e-14));
}

TEST_CASE("separation hypotheses are enforced at N = 10") {
  const double H = hardy_constant();
  ProblemConfig cfg(10, Weight::ah(40, 10));
  CHECK_THROWS_AS(check_separation(cfg, H, 1.0, 2.0), HypothesisError);
  CHECK_THROWS_AS(check_separation(cfg, -1.0, 1.0, 2.0), HypothesisError);
  ProblemConfig ok(10, Weight::ah(H, 10));
  CHECK_THROWS_AS(check_separation(ok, H, 2.0, 1.0), ValidationError);
}

TEST_CASE("Type I profiles intersect") {
  ProblemConfig cfg(3, Weight::constant(3));
  const SeparationResult s = check_separation(cfg, 1.0, 5.0, 10.0);
  CHECK_FALSE(s.hypotheses_checked);
  CHECK(s.min_gap_v < 0.0);
  CHECK(direct_min_gap(cfg, 5.0, 10.0) < 0.0);
}

TEST_CASE("lower envelope on the minimal branch of a_40") {
  ProblemConfig cfg(10, Weight::ah(40, 10));
  CHECK(check_lower_envelope(cfg, 1.0, 2.0, 0.0) > 0.0);
  CHECK(check_lower_envelope(cfg, 1.0, 3.0, 0.25) > 0.0);
  // continuity as gamma -> beta+
  const double g1 = check_lower_envelope(cfg, 1.0, 1.001, 0.25), g2 = check_lower_envelope(cfg, 1.0, 1.002, 0.25);
  CHECK(std::fabs(g1 - g2) < 1e-2);
}

TEST_CASE("lower envelope hypotheses") {
  ProblemConfig c(10, Weight::constant(10));
  CHECK_THROWS_AS(check_lower_envelope(c, 1.0, 2.0, 0.25), HypothesisError);
  ProblemConfig cfg(10, Weight::ah(40, 10));
  CHECK_THROWS_AS(check_lower_envelope(cfg, 2.0, 1.0, 0.25), HypothesisError);
  CHECK_THROWS_AS(check_lower_envelope(cfg, 1.0, 2.0, 2.0), HypothesisError);
  CHECK_THROWS_AS(check_lower_envelope(cfg, 1.0, 30.0, 0.25), HypothesisError);
  ProblemConfig n9(9, Weight::ah(40, 9));
  CHECK_THROWS_AS(check_lower_envelope(n9, 1.0, 2.0, 0.25), HypothesisError);
}
