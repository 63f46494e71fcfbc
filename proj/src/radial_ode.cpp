#include "gelfand/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "gelfand/error.hpp"
#include "gelfand/integrator.hpp"

namespace gelfand {
namespace {

// State in s = log r:
//   v, p = r v_r        shooting variable
//   e, q = r e_r        e = dv/dbeta
//   f, g = r f_r        f = d2v/dbeta2
//   z, z_s              z = v - V, offset from the singular solution V
//   W, W_s              Emden form of V (integrated only when no closed form exists)
// The offset is integrated directly so that lambda / lambda_* keeps relative
// accuracy when v is very close to V.
using State = StateVec<10>;

StepControl step_control(const ProblemConfig& cfg) {
  StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_step = 0.25;
  return ctl;
}

// Singular reference in Emden form: W = V + 2 log r - log 2(N-2).
// For the a_h family (const included) W = -h r^2 / (2N) exactly and
// a e^W = 1 + h r^2 / (2(N-2)).
struct Reference {
  bool exact = false;
  double h = 0.0;
  double n = 3.0;

  explicit Reference(const Weight& w) : n(w.dimension()) {
    const auto fam = w.spec().family;
    exact = fam == WeightFamily::Constant || fam == WeightFamily::AH;
    h = fam == WeightFamily::AH ? w.spec().h : 0.0;
  }
  double w(double r) const { return -h * r * r / (2.0 * n); }
  double w_s(double r) const { return -h * r * r / n; }
  double log_aew(double r) const { return std::log1p(h * r * r / (2.0 * (n - 2.0))); }
};

struct RegularRhs {
  const Weight& wt;
  Reference ref;
  double n2;      // N - 2
  double frozen;  // e^beta when frozen, NaN otherwise

  State operator()(double s, const State& y) const {
    const double r = std::exp(s);
    const double log_a = wt.log_value(r);
    const double k = std::exp(log_a + y[0] + 2.0 * s);
    const double kv = std::isnan(frozen) ? k : std::exp(log_a + 2.0 * s) * frozen;
    const double f_source = std::isnan(frozen) ? y[2] * y[2] + y[4] : y[2] + y[4];
    const double log_aew = ref.exact ? ref.log_aew(r) : log_a + y[8];
    const double aew = std::exp(log_aew);
    State d{};
    d[0] = y[1];
    d[1] = -n2 * y[1] - k;
    d[2] = y[3];
    d[3] = -n2 * y[3] - kv * y[2];
    d[4] = y[5];
    d[5] = -n2 * y[5] - kv * f_source;
    d[6] = y[7];
    d[7] = -n2 * y[7] - 2.0 * n2 * aew * std::expm1(y[6]);
    if (!ref.exact) {
      d[8] = y[9];
      d[9] = -n2 * y[9] - 2.0 * n2 * std::expm1(log_aew);
    }
    return d;
  }
};

// Mixed absolute/relative weights for v and W; purely relative weights for
// the pairs (e, q), (f, g), (z, z_s), which decay together in the far field.
struct ShootScale {
  double operator()(std::size_t i, const State& y, const State& ynew, const StepControl& ctl) const {
    if (i <= 1 || i >= 8) {
      return ctl.abs_tol + ctl.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
    }
    const std::size_t j = i - (i % 2);
    const double m = std::max({std::fabs(y[j]), std::fabs(y[j + 1]), std::fabs(ynew[j]), std::fabs(ynew[j + 1])});
    return ctl.rel_tol * m + 1e-290;
  }
};

void check_beta(double beta) {
  if (!(beta >= kBetaMin && beta <= kBetaMax)) {
    throw ValidationError("beta = " + std::to_string(beta) + " outside the supported range [-50, 60]");
  }
}

State initial_state(const ProblemConfig& cfg, double beta, CoefficientMode mode, const Reference& ref) {
  SeriesStart st = series_start(cfg, beta);
  if (mode == CoefficientMode::Frozen) {
    // frozen e^v = e^beta: e solves the linear problem, f = de/dbeta
    const double n = cfg.dimension;
    const double a2 = cfg.weight.second_derivative_at_origin();
    const auto c = series_coefficients(cfg, beta);
    const double d4 = -std::exp(beta) * (2.0 * c.c2 + 0.5 * a2) / (4.0 * (n + 2.0));
    const double r = st.r, r2 = r * r;
    st.e0 = 1.0 + c.c2 * r2 + c.c4 * r2 * r2;
    st.de0 = 2.0 * c.c2 * r + 4.0 * c.c4 * r2 * r;
    st.f0 = c.c2 * r2 + d4 * r2 * r2;
    st.df0 = 2.0 * c.c2 * r + 4.0 * d4 * r2 * r;
  }
  const double r = st.r, s0 = std::log(r);
  const double d2 = singular_d2(cfg);
  const double w0 = ref.exact ? ref.w(r) : d2 * r * r;
  const double ws0 = ref.exact ? ref.w_s(r) : 2.0 * d2 * r * r;
  const double log_c = std::log(2.0 * (cfg.dimension - 2.0));
  // z = v - V with V = W - 2 s + log 2(N-2)
  const double z0 = st.v0 - (w0 - 2.0 * s0 + log_c);
  const double zs0 = r * st.dv0 - (ws0 - 2.0);
  return {st.v0, r * st.dv0, st.e0, r * st.de0, st.f0, r * st.df0, z0, zs0, ref.exact ? 0.0 : w0,
          ref.exact ? 0.0 : ws0};
}

struct FullShoot {
  std::vector<double> radii;
  std::vector<State> states;
};

std::vector<State> run_shoot(const ProblemConfig& cfg, double beta, std::span<const double> nodes_s,
                             CoefficientMode mode) {
  const Reference ref(cfg.weight);
  const double frozen = mode == CoefficientMode::Frozen ? std::exp(beta) : std::numeric_limits<double>::quiet_NaN();
  RegularRhs rhs{cfg.weight, ref, cfg.dimension - 2.0, frozen};
  std::vector<State> states(nodes_s.size());
  try {
    integrate_to_nodes<10>(rhs, std::log(start_radius(cfg, beta)), initial_state(cfg, beta, mode, ref), nodes_s,
                           step_control(cfg), [&](std::size_t i, double, const State& y) { states[i] = y; },
                           ShootScale{});
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string("regular shoot at beta = ") + std::to_string(beta) + ": " + e.what(),
                           std::exp(e.radius_reached()));
  }
  return states;
}

FullShoot shoot_on_grid(const ProblemConfig& cfg, double beta, double R, CoefficientMode mode) {
  cfg.validate();
  check_beta(beta);
  if (!(R > 0.0 && R <= 5.0)) throw ValidationError("shoot endpoint must lie in (0, 5]");
  FullShoot out;
  out.radii = make_output_grid(start_radius(cfg, beta), R, cfg.grid);
  std::vector<double> nodes(out.radii.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = std::log(out.radii[i]);
  nodes.front() = std::log(start_radius(cfg, beta));
  nodes.back() = std::log(R);
  out.states = run_shoot(cfg, beta, nodes, mode);
  return out;
}

RadialProfile component_profile(const FullShoot& fs, int value_index, double R) {
  RadialProfile p;
  p.R = R;
  p.radii = fs.radii;
  p.values.resize(fs.radii.size());
  p.derivs.resize(fs.radii.size());
  for (std::size_t i = 0; i < fs.radii.size(); ++i) {
    p.values[i] = fs.states[i][value_index];
    p.derivs[i] = fs.states[i][value_index + 1] / fs.radii[i];
  }
  return p;
}

}  // namespace

ProblemConfig::ProblemConfig(int dim, Weight w) : dimension(dim), weight(std::move(w)) {}

void ProblemConfig::validate() const {
  if (dimension < 3 || dimension > 12) throw ValidationError("dimension must satisfy 3 <= N <= 12");
  if (weight.dimension() != dimension) throw ValidationError("weight bound to a different dimension");
  if (!(r_start > 0.0 && r_start <= 1e-3)) throw ValidationError("r_start must lie in (0, 1e-3]");
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6)) throw ValidationError("rel_tol must lie in [1e-13, 1e-6]");
  if (!(abs_tol >= 1e-13 && abs_tol <= 1e-6)) throw ValidationError("abs_tol must lie in [1e-13, 1e-6]");
  gelfand::validate(grid);
}

double start_radius(const ProblemConfig& cfg, double beta) {
  return cfg.r_start * std::min(1.0, std::exp(-0.5 * beta));
}

SeriesCoefficients series_coefficients(const ProblemConfig& cfg, double beta) {
  const double n = cfg.dimension;
  const double eb = std::exp(beta);
  const double a2 = cfg.weight.second_derivative_at_origin();
  const double c2 = -eb / (2.0 * n);
  const double c4 = -eb * (c2 + 0.5 * a2) / (4.0 * (n + 2.0));
  return {c2, c4};
}

SeriesStart series_start(const ProblemConfig& cfg, double beta) {
  const double n = cfg.dimension;
  const double eb = std::exp(beta);
  const double a2 = cfg.weight.second_derivative_at_origin();
  const auto [c2, c4] = series_coefficients(cfg, beta);
  const double d4 = -eb * (2.0 * c2 + 0.5 * a2) / (4.0 * (n + 2.0));   // r^4 coefficient of dv/dbeta
  const double f4 = -eb * (4.0 * c2 + 0.5 * a2) / (4.0 * (n + 2.0));   // r^4 coefficient of d2v/dbeta2
  const double r = start_radius(cfg, beta);
  const double r2 = r * r;
  SeriesStart st;
  st.r = r;
  st.v0 = beta + c2 * r2 + c4 * r2 * r2;
  st.dv0 = 2.0 * c2 * r + 4.0 * c4 * r2 * r;
  st.e0 = 1.0 + c2 * r2 + d4 * r2 * r2;
  st.de0 = 2.0 * c2 * r + 4.0 * d4 * r2 * r;
  st.f0 = c2 * r2 + f4 * r2 * r2;
  st.df0 = 2.0 * c2 * r + 4.0 * f4 * r2 * r;
  return st;
}

ShootResult integrate_ivp_to(const ProblemConfig& cfg, double beta, double R) {
  const FullShoot fs = shoot_on_grid(cfg, beta, R, CoefficientMode::Nonlinear);
  ShootResult res;
  res.beta = beta;
  res.v1 = fs.states.back()[0];
  res.lambda = std::exp(res.v1);
  res.alpha = beta - res.v1;
  res.dlambda_dbeta = res.lambda * fs.states.back()[2];
  res.log_offset = fs.states.back()[6];
  res.profile = component_profile(fs, 0, R);
  res.variation_profile = component_profile(fs, 2, R);
  return res;
}

ShootResult integrate_ivp(const ProblemConfig& cfg, double beta) { return integrate_ivp_to(cfg, beta, 1.0); }

BoundaryData shoot_boundary(const ProblemConfig& cfg, double beta) {
  cfg.validate();
  check_beta(beta);
  const double end[1] = {0.0};
  const State y1 = run_shoot(cfg, beta, end, CoefficientMode::Nonlinear).front();
  BoundaryData b;
  b.beta = beta;
  b.lambda = std::exp(y1[0]);
  b.alpha = beta - y1[0];
  b.dlambda_dbeta = b.lambda * y1[2];
  b.d2lambda_dbeta2 = b.lambda * (y1[4] + y1[2] * y1[2]);
  b.log_offset = y1[6];
  return b;
}

RadialProfile integrate_second_variation(const ProblemConfig& cfg, double beta, CoefficientMode mode) {
  return component_profile(shoot_on_grid(cfg, beta, 1.0, mode), 4, 1.0);
}

RadialProfile integrate_first_variation(const ProblemConfig& cfg, double beta, CoefficientMode mode) {
  return component_profile(shoot_on_grid(cfg, beta, 1.0, mode), 2, 1.0);
}

bool has_closed_form_singular(const Weight& w) { return Reference(w).exact; }

double singular_d2(const ProblemConfig& cfg) {
  const double n = cfg.dimension;
  return -(n - 2.0) * cfg.weight.second_derivative_at_origin() / (4.0 * (n - 1.0));
}

SingularResult integrate_singular(const ProblemConfig& cfg) {
  cfg.validate();
  const double n2 = cfg.dimension - 2.0;
  const double log_c = std::log(2.0 * n2);
  const double d2 = singular_d2(cfg);
  const double r0 = cfg.r_start;
  std::vector<double> radii = make_output_grid(r0, 1.0, cfg.grid);
  std::vector<double> nodes(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) nodes[i] = std::log(radii[i]);
  nodes.back() = 0.0;

  // Emden form w = V + 2 log r - log 2(N-2):  w_ss + (N-2) w_s + 2(N-2)(a e^w - 1) = 0
  const Weight& wt = cfg.weight;
  auto rhs = [&](double s, const StateVec<2>& z) -> StateVec<2> {
    const double r = std::exp(s);
    return {z[1], -n2 * z[1] - 2.0 * n2 * std::expm1(z[0] + wt.log_value(r))};
  };
  std::vector<StateVec<2>> states(nodes.size());
  try {
    integrate_to_nodes<2>(rhs, nodes.front(), StateVec<2>{d2 * r0 * r0, 2.0 * d2 * r0 * r0}, nodes,
                          step_control(cfg), [&](std::size_t i, double, const StateVec<2>& z) { states[i] = z; });
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string("singular shoot: ") + e.what(), std::exp(e.radius_reached()));
  }
  SingularResult res;
  res.profile.R = 1.0;
  res.profile.radii = radii;
  res.profile.values.resize(radii.size());
  res.profile.derivs.resize(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    res.profile.values[i] = states[i][0] - 2.0 * nodes[i] + log_c;
    res.profile.derivs[i] = (states[i][1] - 2.0) / radii[i];
  }
  res.lambda_star = std::exp(res.profile.values.back());
  return res;
}

double residual_Uh(int dimension, double h, const std::vector<double>& grid) {
  if (dimension < 3 || dimension > 10) throw ValidationError("residual_Uh: requires 3 <= N <= 10");
  const double n = dimension;
  if (!(h > -2.0 * (n - 2.0))) throw ValidationError("residual_Uh: requires h > -2(N-2)");
  const Weight ah = Weight::ah(h, dimension);
  const double lambda_h = 2.0 * (n - 2.0) * std::exp(-h / (2.0 * n));
  double worst = 0.0;
  for (double r : grid) {
    if (!(r >= 1e-4 && r <= 1.0)) throw ValidationError("residual_Uh: grid must lie in [1e-4, 1]");
    const double u = h / (2.0 * n) - 2.0 * std::log(r) - h / (2.0 * n) * r * r;
    // -Delta U_h with Delta = d2/dr2 + (N-1)/r d/dr
    const double du = -2.0 / r - h / n * r;
    const double d2u = 2.0 / (r * r) - h / n;
    const double minus_lap = -(d2u + (n - 1.0) / r * du);
    const double rhs = lambda_h * ah.value(r) * std::exp(u);
    worst = std::max(worst, std::fabs(minus_lap - rhs) / rhs);
  }
  return worst;
}

}  // namespace gelfand
