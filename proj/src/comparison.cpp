#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gelfand/bessel.hpp"
#include "gelfand/bifurcation.hpp"
#include "gelfand/error.hpp"
#include "gelfand/quadrature.hpp"

namespace gelfand {
namespace {

HermiteInterpolant interpolant(const RadialProfile& p) {
  return HermiteInterpolant(p.radii, p.values, p.derivs);
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> r(static_cast<std::size_t>(n));
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) r[i] = std::exp(la + (lb - la) * i / (n - 1));
  r.front() = a;
  r.back() = b;
  return r;
}

int sign_changes(const std::vector<double>& d, const std::vector<double>& band) {
  int count = 0, last = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::fabs(d[i]) <= band[i]) continue;
    const int s = d[i] > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

int zero_number(const ProblemConfig& cfg, double beta, const RadialProfile& singular_profile) {
  cfg.validate();
  if (singular_profile.size() < 2 || singular_profile.radii.front() > cfg.r_start * (1.0 + 1e-12) ||
      singular_profile.radii.back() < 1.0 - 1e-12) {
    throw ValidationError("zero_number: singular profile must cover [r_start, 1]");
  }
  const ShootResult shoot = integrate_ivp(cfg, beta);
  const HermiteInterpolant v = interpolant(shoot.profile);
  const HermiteInterpolant V = interpolant(singular_profile);
  const double noise = std::max(1e-9, 100.0 * cfg.rel_tol);

  const std::vector<double> r = log_grid(cfg.r_start, 1.0, kZeroNumberGrid);
  std::vector<double> d(r.size()), band(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double Vi = V(r[i]);
    d[i] = v(r[i]) - Vi;
    band[i] = noise * (1.0 + std::fabs(Vi));
  }
  // confirm every candidate interval on an 8x finer local grid
  int count = 0;
  std::size_t prev = r.size();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::fabs(d[i]) <= band[i]) continue;
    if (prev != r.size() && (d[i] > 0.0) != (d[prev] > 0.0)) {
      const std::size_t m = 8 * (i - prev);
      std::vector<double> dd(m + 1), bb(m + 1);
      for (std::size_t k = 0; k <= m; ++k) {
        const double t = std::exp(std::log(r[prev]) + (std::log(r[i]) - std::log(r[prev])) * k / m);
        const double Vt = V(t);
        dd[k] = v(t) - Vt;
        bb[k] = noise * (1.0 + std::fabs(Vt));
      }
      dd.front() = d[prev];
      dd.back() = d[i];
      count += sign_changes(dd, bb);
    }
    prev = i;
  }
  return count;
}

SeparationResult check_separation(const ProblemConfig& cfg, double h, double beta, double gamma) {
  cfg.validate();
  if (!(gamma >= beta)) throw ValidationError("check_separation: requires gamma >= beta");
  const int n = cfg.dimension;
  const double H = hardy_constant();
  SeparationResult res{};
  res.hypotheses_checked = n == 10;
  if (n == 10) {
    if (!(h > 0.0)) throw HypothesisError("check_separation: requires h > 0");
    if (ratio_derivative_sign(cfg.weight, h) != RatioSign::NonPositiveEverywhere) {
      throw HypothesisError("check_separation: weight '" + cfg.weight.text() +
                            "' does not satisfy (a/a_h)' <= 0 on (0, 1]");
    }
  }
  res.r_h = h > 0.0 ? std::min(1.0, std::sqrt(H / h)) : 1.0;
  if (res.r_h <= cfg.r_start) throw ValidationError("check_separation: comparison radius below r_start");

  ProblemConfig cfg_h = cfg;
  cfg_h.weight = Weight::ah(H, n);
  const ShootResult lo = integrate_ivp(cfg, beta);
  const ShootResult hi = gamma == beta ? lo : integrate_ivp(cfg, gamma);
  const ShootResult hi_h = integrate_ivp(cfg_h, gamma);
  const HermiteInterpolant v_lo = interpolant(lo.profile), v_hi = interpolant(hi.profile);
  const HermiteInterpolant vh_hi = interpolant(hi_h.profile);

  res.min_gap_v = std::numeric_limits<double>::infinity();
  res.min_gap_weighted = std::numeric_limits<double>::infinity();
  for (double r : log_grid(cfg.r_start, res.r_h, kZeroNumberGrid)) {
    const double a = v_lo(r);
    res.min_gap_v = std::min(res.min_gap_v, v_hi(r) - a);
    const double weighted = (vh_hi(r) + cfg_h.weight.log_value(r)) - (a + cfg.weight.log_value(r));
    res.min_gap_weighted = std::min(res.min_gap_weighted, weighted);
  }
  return res;
}

double check_lower_envelope(const ProblemConfig& cfg, double beta, double gamma, double eps0) {
  cfg.validate();
  if (cfg.dimension != 10) throw HypothesisError("check_lower_envelope: requires N = 10");
  if (ratio_derivative_sign(cfg.weight) != RatioSign::PositiveEverywhere) {
    throw HypothesisError("check_lower_envelope: weight '" + cfg.weight.text() +
                          "' does not satisfy (a/a_H)' > 0 on (0, 1]");
  }
  if (!(beta > 0.0 && gamma > beta)) throw HypothesisError("check_lower_envelope: requires 0 < beta < gamma");
  if (!(eps0 >= 0.0 && eps0 <= 1.0)) throw HypothesisError("check_lower_envelope: requires eps0 in [0, 1]");
  // gamma must lie on the minimal branch: lambda increasing on [0, gamma]
  constexpr double kProbe = 0.05;
  for (double b = 0.0;; b = std::min(gamma, b + kProbe)) {
    if (!(shoot_boundary(cfg, b).dlambda_dbeta > 0.0)) {
      throw HypothesisError("check_lower_envelope: gamma = " + std::to_string(gamma) +
                            " is beyond the first turning point (lambda' <= 0 at beta = " + std::to_string(b) + ")");
    }
    if (b >= gamma) break;
  }
  const int n = cfg.dimension;
  const double H = hardy_constant();
  ProblemConfig cfg0 = cfg;
  cfg0.weight = Weight::constant(n);
  const HermiteInterpolant v = interpolant(integrate_ivp(cfg, gamma).profile);
  const HermiteInterpolant v0 = interpolant(integrate_ivp(cfg0, beta).profile);
  const double k = (H + eps0) / (2.0 * (n - 2.0));
  double gap = std::numeric_limits<double>::infinity();
  for (double r : log_grid(cfg.r_start, 1.0, kZeroNumberGrid)) {
    const double lhs = v(r) + cfg.weight.log_value(r);
    const double rhs = v0(r) + std::log1p(k * r * r);
    gap = std::min(gap, lhs - rhs);
  }
  return gap;
}

}  // namespace gelfand
