#pragma once

// Radial shooting for -Delta v = a(r) e^v on the unit ball, written in the
// shooting variable v = u + log(lambda) with v(0) = beta, v'(0) = 0. The
// boundary value recovers lambda = exp(v(1)) and alpha = beta - log(lambda).

#include <vector>

#include "gelfand/grid.hpp"
#include "gelfand/weights.hpp"

namespace gelfand {

inline constexpr double kBetaMin = -50.0;
inline constexpr double kBetaMax = 60.0;

struct ProblemConfig {
  ProblemConfig(int dimension, Weight weight);

  int dimension;
  Weight weight;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double r_start = 1e-4;
  GridSpec grid;

  // Throws ValidationError on out-of-range fields.
  void validate() const;
};

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> derivs;
  double R = 1.0;

  std::size_t size() const { return radii.size(); }
};

// Series data at the start radius. The start radius is r_start scaled by
// min(1, e^{-beta/2}) so that the expansion stays inside its range of
// validity when beta is large.
struct SeriesStart {
  double r;
  double v0, dv0;   // v, dv/dr
  double e0, de0;   // dv/dbeta and its r-derivative
  double f0, df0;   // d2v/dbeta2 and its r-derivative
};

double start_radius(const ProblemConfig& cfg, double beta);
SeriesStart series_start(const ProblemConfig& cfg, double beta);

// Taylor coefficients of v(r) = beta + c2 r^2 + c4 r^4 + ...
struct SeriesCoefficients {
  double c2, c4;
};
SeriesCoefficients series_coefficients(const ProblemConfig& cfg, double beta);

struct ShootResult {
  double beta = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double v1 = 0.0;
  double dlambda_dbeta = 0.0;
  // log(lambda / lambda_*), integrated as an offset from the singular
  // solution so that it stays accurate when lambda is close to lambda_*
  double log_offset = 0.0;
  RadialProfile profile;
  RadialProfile variation_profile;
};

// Full shoot with profile output on the configured grid.
ShootResult integrate_ivp(const ProblemConfig& cfg, double beta);

// Same, on (0, R] with R in (0, 5]; the weight formula extends past r = 1.
ShootResult integrate_ivp_to(const ProblemConfig& cfg, double beta, double R);

// Boundary data only, no profile storage.
struct BoundaryData {
  double beta;
  double lambda;
  double alpha;
  double dlambda_dbeta;
  double d2lambda_dbeta2;
  double log_offset;   // log(lambda / lambda_*)
};
BoundaryData shoot_boundary(const ProblemConfig& cfg, double beta);

enum class CoefficientMode {
  Nonlinear,
  // e^v replaced by e^beta in the variational equations (test harness)
  Frozen,
};

// Profile of d2v/dbeta2. lambda'' = lambda (v''(1) + v'(1)^2).
RadialProfile integrate_second_variation(const ProblemConfig& cfg, double beta,
                                         CoefficientMode mode = CoefficientMode::Nonlinear);

// Variation profile computed in the same mode (used alongside Frozen).
RadialProfile integrate_first_variation(const ProblemConfig& cfg, double beta, CoefficientMode mode);

struct SingularResult {
  double lambda_star;
  RadialProfile profile;   // V_*, with V_*(1) = log(lambda_star)
};

// Matched start V = -2 log r + log 2(N-2) + d2 r^2 at r_start; the equation is
// integrated in Emden form so the leading singularity is removed exactly.
SingularResult integrate_singular(const ProblemConfig& cfg);

// True for the a_h family (const included), whose singular solution is
// known in closed form and is used as the offset reference.
bool has_closed_form_singular(const Weight& w);

// d2 = -(N-2) a''(0) / (4(N-1)).
double singular_d2(const ProblemConfig& cfg);

// max over grid of |-Delta U_h - lambda_h a_h e^{U_h}| / (lambda_h a_h e^{U_h}).
double residual_Uh(int dimension, double h, const std::vector<double>& grid);

// Max relative mismatch of -r^{N-1} v'(r) against int_0^r s^{N-1} a e^v ds.
double flux_residual(const ProblemConfig& cfg, const ShootResult& shoot);
// Same identity for a singular profile (with its own inner closure).
double flux_residual_singular(const ProblemConfig& cfg, const RadialProfile& singular);

// Relative mismatch of the two sides of the Pohozaev-type identity with
// multiplier mu, integrated over [first radius, 1].
double pohozaev_residual(const ProblemConfig& cfg, const ShootResult& shoot, double mu);

struct AsymptoticDiagnostics {
  // radii hold t = -log r (increasing), values w(t), derivs dw/dt
  RadialProfile emden;
  // radii hold s = e^{beta/2} r, values v(e^{-beta/2} s) - beta; empty if beta < 0
  RadialProfile rescaled;
};

AsymptoticDiagnostics asymptotic_diagnostics(const ProblemConfig& cfg, const RadialProfile& profile,
                                             double beta);

// v_0(s, 0): solution of -Delta v = e^v, v(0) = 0 on (0, R], R <= 5.
RadialProfile rescaling_limit(int dimension, double R, const ProblemConfig& tolerances);

// sup over s in (0, s_max] of |rescaled(s) - limit(s)|; infinity when the
// rescaled window does not reach s_max.
double rescaling_distance(const RadialProfile& rescaled, const RadialProfile& limit, double s_max);

}  // namespace gelfand
