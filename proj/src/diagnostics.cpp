#include <algorithm>
#include <cmath>
#include <limits>

#include "gelfand/error.hpp"
#include "gelfand/quadrature.hpp"
#include "gelfand/radial_ode.hpp"

namespace gelfand {
namespace {

double rel_mismatch(double lhs, double rhs) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), std::numeric_limits<double>::min()});
  return std::fabs(lhs - rhs) / scale;
}

// Max relative mismatch of -r^{N-1} v' against inner + int_{r0}^{r} s^{N-1} a e^v.
double flux_mismatch(const ProblemConfig& cfg, const RadialProfile& p, double inner) {
  const int n = cfg.dimension;
  std::vector<double> integrand(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.radii[i];
    integrand[i] = std::pow(r, n - 1) * cfg.weight.value(r) * std::exp(p.values[i]);
  }
  const std::vector<double> mass = cumulative_integral(p.radii, integrand);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lhs = -std::pow(p.radii[i], n - 1) * p.derivs[i];
    worst = std::max(worst, rel_mismatch(lhs, inner + mass[i]));
  }
  return worst;
}

}  // namespace

double flux_residual(const ProblemConfig& cfg, const ShootResult& shoot) {
  const double n = cfg.dimension;
  const double r0 = shoot.profile.radii.front();
  const auto c = series_coefficients(cfg, shoot.beta);
  const double a2 = cfg.weight.second_derivative_at_origin();
  // int_0^{r0} s^{N-1} e^beta (1 + (c2 + a''(0)/2) s^2) ds
  const double inner = std::exp(shoot.beta) *
                       (std::pow(r0, n) / n + (c.c2 + 0.5 * a2) * std::pow(r0, n + 2.0) / (n + 2.0));
  return flux_mismatch(cfg, shoot.profile, inner);
}

double flux_residual_singular(const ProblemConfig& cfg, const RadialProfile& singular) {
  const double n = cfg.dimension;
  const double r0 = singular.radii.front();
  const double a2 = cfg.weight.second_derivative_at_origin();
  const double d2 = singular_d2(cfg);
  // a e^V = 2(N-2) s^{-2} (1 + (a''(0)/2 + d2) s^2) near the origin
  const double inner = 2.0 * std::pow(r0, n - 2.0) + 2.0 * (n - 2.0) * (0.5 * a2 + d2) * std::pow(r0, n) / n;
  return flux_mismatch(cfg, singular, inner);
}

double pohozaev_residual(const ProblemConfig& cfg, const ShootResult& shoot, double mu) {
  const RadialProfile& p = shoot.profile;
  const double n = cfg.dimension;
  const std::size_t m = p.size();
  std::vector<double> left(m), right(m), abs_left(m), abs_right(m);
  auto boundary = [&](std::size_t i) {
    const double r = p.radii[i], v = p.values[i], dv = p.derivs[i];
    return std::pow(r, n) * (0.5 * dv * dv + cfg.weight.value(r) * std::expm1(v) + mu / r * v * dv);
  };
  for (std::size_t i = 0; i < m; ++i) {
    const double r = p.radii[i], v = p.values[i], dv = p.derivs[i];
    const WeightValue a = cfg.weight.eval(r);
    const double em1 = std::expm1(v);
    left[i] = a.da * em1 * std::pow(r, n);
    right[i] = std::pow(r, n - 1.0) *
               (n * a.a * em1 - mu * a.a * v * std::exp(v) + (mu + 1.0 - 0.5 * n) * dv * dv);
    abs_left[i] = std::fabs(left[i]);
    abs_right[i] = std::pow(r, n - 1.0) * (std::fabs(n * a.a * em1) + std::fabs(mu * a.a * v * std::exp(v)) +
                                            std::fabs((mu + 1.0 - 0.5 * n) * dv * dv));
  }
  const double b1 = boundary(m - 1), b0 = boundary(0);
  const double i_left = integrate_samples(p.radii, left);
  const double i_right = integrate_samples(p.radii, right);
  const double lhs = b1 - b0 - i_left;
  const double scale = std::fabs(b1) + std::fabs(b0) + integrate_samples(p.radii, abs_left) + integrate_samples(p.radii, abs_right);
  if (scale == 0.0) return 0.0;
  return std::fabs(lhs - i_right) / scale;
}

AsymptoticDiagnostics asymptotic_diagnostics(const ProblemConfig& cfg, const RadialProfile& profile,
                                             double beta) {
  if (profile.size() < 2) throw ValidationError("asymptotic_diagnostics: profile too short");
  const double log_c = std::log(2.0 * (cfg.dimension - 2.0));
  AsymptoticDiagnostics out;
  const double r_min = cfg.r_start * (1.0 - 1e-12);
  for (std::size_t k = profile.size(); k-- > 0;) {
    const double r = profile.radii[k];
    if (r > 1.0 || r < r_min) continue;
    out.emden.radii.push_back(-std::log(r));
    out.emden.values.push_back(profile.values[k] + 2.0 * std::log(r) - log_c);
    out.emden.derivs.push_back(-r * profile.derivs[k] - 2.0);
  }
  if (!out.emden.radii.empty()) {
    out.emden.radii.front() = std::max(0.0, out.emden.radii.front());
    out.emden.R = out.emden.radii.back();
  }
  if (beta >= 0.0) {
    const double scale = std::exp(0.5 * beta);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      out.rescaled.radii.push_back(scale * profile.radii[i]);
      out.rescaled.values.push_back(profile.values[i] - beta);
      out.rescaled.derivs.push_back(profile.derivs[i] / scale);
    }
    out.rescaled.R = out.rescaled.radii.back();
  }
  return out;
}

RadialProfile rescaling_limit(int dimension, double R, const ProblemConfig& tolerances) {
  ProblemConfig cfg(dimension, Weight::constant(dimension));
  cfg.rel_tol = tolerances.rel_tol;
  cfg.abs_tol = tolerances.abs_tol;
  cfg.r_start = tolerances.r_start;
  cfg.grid = tolerances.grid;
  return integrate_ivp_to(cfg, 0.0, R).profile;
}

double rescaling_distance(const RadialProfile& rescaled, const RadialProfile& limit, double s_max) {
  if (rescaled.size() < 2 || rescaled.radii.back() < s_max * (1.0 - 1e-12) ||
      limit.radii.back() < s_max * (1.0 - 1e-12)) {
    return std::numeric_limits<double>::infinity();
  }
  const HermiteInterpolant ref(limit.radii, limit.values, limit.derivs);
  const double inv_n = -limit.derivs.front() / limit.radii.front();   // -2 c2 = 1/N
  double worst = 0.0;
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    const double s = rescaled.radii[i];
    if (s > s_max * (1.0 + 1e-12)) break;
    // below the first node of the limit profile use v_0 = -s^2/(2N)
    const double target = s >= ref.front() ? ref(s) : -0.5 * inv_n * s * s;
    worst = std::max(worst, std::fabs(rescaled.values[i] - target));
  }
  return worst;
}

}  // namespace gelfand
