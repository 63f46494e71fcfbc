#include <doctest.h>

#include <cmath>
#include <vector>

#include "gelfand/bessel.hpp"
#include "gelfand/error.hpp"
#include "gelfand/radial_ode.hpp"
#include "rk4_oracle.hpp"

using namespace gelfand;

namespace {

double one(double) { return 1.0; }

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  g.back() = b;
  return g;
}

}  // namespace

TEST_CASE("series coefficients") {
  ProblemConfig cfg(10, Weight::constant(10));
  const SeriesCoefficients c = series_coefficients(cfg, 0.0);
  CHECK(c.c2 == doctest::Approx(-1.0 / 20.0).epsilon(1e-15));
  // c4 = -e^beta (c2 + a''(0)/2) / (4 (N + 2)) with a''(0) = 0
  CHECK(c.c4 == doctest::Approx((1.0 / 20.0) / 48.0).epsilon(1e-15));

  const double H = hardy_constant();
  ProblemConfig cfg_h(10, Weight::ah(H, 10));
  const SeriesCoefficients ch = series_coefficients(cfg_h, 1.5);
  const double eb = std::exp(1.5);
  CHECK(ch.c2 == doctest::Approx(-eb / 20.0).epsilon(1e-15));
  CHECK(ch.c4 == doctest::Approx(-eb * (-eb / 20.0 + 0.5 * 18.0 * H / 80.0) / 48.0).epsilon(1e-14));
}

TEST_CASE("series start agrees with a fixed-step oracle launched at r = 1e-8") {
  for (auto [n, beta] : {std::pair{3, 0.0}, std::pair{10, 0.0}, std::pair{5, 3.0}}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const SeriesStart st = series_start(cfg, beta);
    CHECK(st.r <= cfg.r_start);
    // oracle run to the start radius: equal-step RK4 over [1e-8, r]
    using S = std::array<double, 2>;
    const double r0 = 1e-8;
    const double v2 = -std::exp(beta) / n;
    S y{beta + 0.5 * v2 * r0 * r0, v2 * r0};
    const int steps = 2000;
    const double h = (st.r - r0) / steps;
    auto f = [&](double r, const S& z) -> S { return {z[1], -std::exp(z[0]) - (n - 1) * z[1] / r}; };
    double r = r0;
    for (int i = 0; i < steps; ++i) {
      const S k1 = f(r, y);
      const S k2 = f(r + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
      const S k3 = f(r + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
      const S k4 = f(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
      for (int j = 0; j < 2; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
      r = r0 + (i + 1) * h;
    }
    CHECK(std::fabs(st.v0 - y[0]) < 1e-13);
    CHECK(std::fabs(st.dv0 - y[1]) < 1e-12 * std::fabs(y[1]) + 1e-18);
    CHECK(st.e0 == doctest::Approx(1.0 + series_coefficients(cfg, beta).c2 * st.r * st.r).epsilon(1e-12));
  }
}

TEST_CASE("v0 tends to beta as r_start shrinks") {
  ProblemConfig cfg(4, Weight::constant(4));
  cfg.r_start = 1e-7;
  CHECK(std::fabs(series_start(cfg, 2.0).v0 - 2.0) < 1e-12);
}

TEST_CASE("boundary values agree with the RK4 oracle") {
  for (auto [n, beta] : {std::pair{3, -10.0}, std::pair{3, 0.0}, std::pair{10, 0.0}, std::pair{5, 3.0},
                         std::pair{3, 2.8}}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const ShootResult s = integrate_ivp(cfg, beta);
    const oracle::Rk4Result o = oracle::rk4_shoot(n, beta, one);
    CHECK(std::fabs(s.v1 - o.v1) < 1e-10);
    CHECK(s.dlambda_dbeta / s.lambda == doctest::Approx(o.e1).epsilon(1e-9));
  }
  const Weight w = Weight::ah(40, 10);
  ProblemConfig cfg(10, w);
  const ShootResult s = integrate_ivp(cfg, 4.0);
  const oracle::Rk4Result o = oracle::rk4_shoot(10, 4.0, [&](double r) { return w.value(r); });
  CHECK(std::fabs(s.v1 - o.v1) < 1e-10);
}

TEST_CASE("beta = -10 emanates from the origin") {
  ProblemConfig cfg(3, Weight::constant(3));
  const ShootResult s = integrate_ivp(cfg, -10.0);
  CHECK(std::fabs(s.lambda / std::exp(-10.0) - 1.0) < 1e-3);
}

TEST_CASE("ShootResult invariants") {
  for (int n : {3, 6, 10}) {
    ProblemConfig cfg(n, Weight::constant(n));
    for (double beta : {-3.0, 1.0, 8.0, 25.0}) {
      const ShootResult s = integrate_ivp(cfg, beta);
      CHECK(s.lambda == doctest::Approx(std::exp(s.v1)).epsilon(1e-15));
      CHECK(s.alpha == doctest::Approx(beta - std::log(s.lambda)).epsilon(1e-14));
      REQUIRE(s.profile.size() > 10);
      CHECK(s.profile.radii.front() >= cfg.r_start * std::min(1.0, std::exp(-beta / 2.0)) / 2.0);
      CHECK(s.profile.radii.back() == 1.0);
      CHECK(s.profile.R == 1.0);
      for (std::size_t i = 1; i < s.profile.size(); ++i) CHECK(s.profile.radii[i] > s.profile.radii[i - 1]);
      bool monotone = true;
      for (double d : s.profile.derivs) monotone = monotone && d <= 0.0;
      CHECK(monotone);
      CHECK(std::fabs(s.variation_profile.values.front() - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("N = 10, a = 1: lambda increases and stays below 16") {
  ProblemConfig cfg(10, Weight::constant(10));
  double prev = 0.0;
  for (double beta : {0.0, 5.0, 10.0, 20.0, 30.0}) {
    const double lam = integrate_ivp(cfg, beta).lambda;
    CHECK(lam > prev);
    CHECK(lam < 16.0);
    prev = lam;
  }
}

TEST_CASE("halving rel_tol moves lambda by less than 10 rel_tol lambda") {
  for (int n : {3, 10}) {
    ProblemConfig cfg(n, Weight::constant(n));
    cfg.rel_tol = 1e-8;
    ProblemConfig half = cfg;
    half.rel_tol = 0.5e-8;
    for (double beta : {0.0, 4.0, 12.0}) {
      const double a = integrate_ivp(cfg, beta).lambda, b = integrate_ivp(half, beta).lambda;
      CHECK(std::fabs(a - b) < 10.0 * cfg.rel_tol * std::fabs(a));
    }
  }
}

TEST_CASE("variational derivative matches central differences") {
  for (auto [n, beta] : {std::pair{3, 1.0}, std::pair{3, 6.0}, std::pair{10, 2.0}, std::pair{5, 3.0}}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const double d = 1e-4;
    const double fd = (integrate_ivp(cfg, beta + d).lambda - integrate_ivp(cfg, beta - d).lambda) / (2 * d);
    CHECK(integrate_ivp(cfg, beta).dlambda_dbeta == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("second variation matches the second difference of lambda") {
  for (auto [n, beta] : {std::pair{3, 1.0}, std::pair{3, 2.8}, std::pair{10, 2.0}}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const double d = 1e-3;
    const double l0 = integrate_ivp(cfg, beta).lambda;
    const double fd = (integrate_ivp(cfg, beta + d).lambda - 2 * l0 + integrate_ivp(cfg, beta - d).lambda) / (d * d);
    const BoundaryData b = shoot_boundary(cfg, beta);
    CHECK(b.d2lambda_dbeta2 == doctest::Approx(fd).epsilon(1e-3));
    const RadialProfile f = integrate_second_variation(cfg, beta);
    const ShootResult s = integrate_ivp(cfg, beta);
    const double e1 = s.variation_profile.values.back();
    CHECK(l0 * (f.values.back() + e1 * e1) == doctest::Approx(b.d2lambda_dbeta2).epsilon(1e-9));
    CHECK(f.values.front() == doctest::Approx(0.0).epsilon(1e-6));
  }
}

TEST_CASE("first fold of N = 3 is a maximum") {
  ProblemConfig cfg(3, Weight::constant(3));
  // dense grid oracle for the first sign change of lambda'
  double lo = 0.0, hi = 0.0, prev = shoot_boundary(cfg, 0.0).dlambda_dbeta;
  for (double b = 0.05; b < 6.0; b += 0.05) {
    const double d = shoot_boundary(cfg, b).dlambda_dbeta;
    if (prev > 0 && d <= 0) {
      lo = b - 0.05;
      hi = b;
      break;
    }
    prev = d;
  }
  REQUIRE(hi > 0.0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shoot_boundary(cfg, mid).dlambda_dbeta > 0 ? lo : hi) = mid;
  }
  CHECK(shoot_boundary(cfg, 0.5 * (lo + hi)).d2lambda_dbeta2 < 0.0);
}

TEST_CASE("frozen coefficients: v'' = (r/2) dv'/dr") {
  // with e^v frozen to e^beta, v' = phi(sqrt(k) r) and v'' = k d/dk of it
  for (auto [n, beta] : {std::pair{3, 1.0}, std::pair{10, 2.5}}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const RadialProfile e = integrate_first_variation(cfg, beta, CoefficientMode::Frozen);
    const RadialProfile f = integrate_second_variation(cfg, beta, CoefficientMode::Frozen);
    REQUIRE(e.size() == f.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      worst = std::max(worst, std::fabs(f.values[i] - 0.5 * e.radii[i] * e.derivs[i]));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("rejects invalid configurations and guardrail violations") {
  ProblemConfig cfg(3, Weight::constant(3));
  CHECK_THROWS_AS(integrate_ivp(cfg, 61.0), ValidationError);
  CHECK_THROWS_AS(integrate_ivp(cfg, -51.0), ValidationError);
  CHECK_THROWS_AS(integrate_ivp_to(cfg, 1.0, 6.0), ValidationError);
  CHECK_THROWS_AS(ProblemConfig(2, Weight::constant(3)).validate(), ValidationError);
  ProblemConfig bad = cfg;
  bad.r_start = 1e-2;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.rel_tol = 1e-3;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(ProblemConfig(4, Weight::constant(3)).validate(), ValidationError);
}

TEST_CASE("singular solution for a = 1 is exact") {
  for (int n : {3, 7, 10}) {
    ProblemConfig cfg(n, Weight::constant(n));
    const SingularResult s = integrate_singular(cfg);
    CHECK(s.lambda_star == doctest::Approx(2.0 * (n - 2)).epsilon(1e-13));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.profile.size(); ++i) {
      const double r = s.profile.radii[i];
      worst = std::max(worst, std::fabs(s.profile.values[i] - (-2 * std::log(r) + std::log(2.0 * (n - 2)))));
      worst = std::max(worst, std::fabs(s.profile.derivs[i] * r + 2.0));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("singular shooting on a_h reproduces the closed form") {
  const double H = hardy_constant();
  for (double h : {0.0, H, 40.0}) {
    ProblemConfig cfg(10, Weight::ah(h, 10));
    const SingularResult s = integrate_singular(cfg);
    const double lh = 16.0 * std::exp(-h / 20.0);
    CHECK(std::fabs(s.lambda_star - lh) / lh <= 1e-6);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.profile.size(); ++i) {
      const double r = s.profile.radii[i];
      worst = std::max(worst, std::fabs(s.profile.values[i] - (-2 * std::log(r) + std::log(16.0) - h * r * r / 20)));
    }
    CHECK(worst <= 1e-6);
    CHECK(s.profile.radii.front() == doctest::Approx(cfg.r_start));
  }
  // other dimensions: d2 = -h / (2N)
  for (int n : {4, 7}) {
    ProblemConfig cfg(n, Weight::ah(5.0, n));
    CHECK(singular_d2(cfg) == doctest::Approx(-5.0 / (2.0 * n)).epsilon(1e-14));
    const double lh = 2.0 * (n - 2) * std::exp(-5.0 / (2.0 * n));
    CHECK(std::fabs(integrate_singular(cfg).lambda_star - lh) / lh <= 1e-8);
  }
  CHECK(has_closed_form_singular(Weight::ah(3.0, 10)));
  CHECK_FALSE(has_closed_form_singular(Weight(parse_weight("polyexp:0.5;d=0"), 10)));
}

TEST_CASE("numerically integrated singular solution for a polyexp weight") {
  // the Emden variable must still vanish at the origin and V' r -> -2
  ProblemConfig cfg(6, Weight(parse_weight("polyexp:0.5,0.1;d=-0.2"), 6));
  const SingularResult s = integrate_singular(cfg);
  const double r0 = s.profile.radii.front();
  CHECK(std::fabs(s.profile.values.front() - (-2 * std::log(r0) + std::log(8.0))) < 1e-7);
  CHECK(s.lambda_star > 0.0);
  CHECK(flux_residual_singular(cfg, s.profile) < 1e-8);
}

TEST_CASE("residual of the explicit singular family") {
  const std::vector<double> grid = log_grid(1e-4, 1.0, 2048);
  CHECK(residual_Uh(10, 0.0, grid) < 1e-13);
  CHECK(residual_Uh(10, 40.0, grid) <= 1e-12);
  CHECK(residual_Uh(3, -1.0, grid) <= 1e-12);
  CHECK_THROWS_AS(residual_Uh(3, -2.0, grid), ValidationError);
  CHECK_THROWS_AS(residual_Uh(11, 1.0, grid), ValidationError);
  CHECK_THROWS_AS(residual_Uh(10, 1.0, {1e-5}), ValidationError);
}
