#pragma once

// Bifurcation curve beta -> (lambda(beta), alpha(beta)), fold detection and
// the Type I/II/III classification.

#include <string>
#include <vector>

#include "gelfand/radial_ode.hpp"

namespace gelfand {

struct CurveSample {
  double beta;
  double lambda;
  double alpha;
  double dlambda_dbeta;
  double log_offset;   // log(lambda / lambda_*)
  bool turning = false;
};

enum class TurningKind { Max, Min };
const char* to_string(TurningKind k);

struct TurningPoint {
  double beta;
  double lambda;
  double alpha;
  TurningKind kind;
  double dlambda_dbeta;
  double d2lambda_dbeta2;
};

struct BifurcationCurve {
  std::vector<CurveSample> samples;
  std::vector<TurningPoint> turning_points;
  double beta_min = 0.0;
  double beta_max = 0.0;
  double max_step = 0.0;
  // false when log_offset inherits the round-off of a numerically integrated
  // singular solution (weights without a closed-form singular solution)
  bool offsets_exact = false;
  bool truncated = false;
  std::string diagnostic;
};

// Adaptive sampling on [beta_min, beta_max]: a uniform pass with spacing at
// most max_step, then interval halving while |delta lambda| > 1% of lambda
// or dlambda/dbeta changes sign. Each sign change is refined by bisection
// to 1e-8 in beta. On integrator failure the curve is truncated before the
// first failing beta and `truncated`/`diagnostic` are set.
BifurcationCurve trace_curve(const ProblemConfig& cfg, double beta_min, double beta_max, double max_step);

enum class DiagramType { I, II, III, Undetermined };
const char* to_string(DiagramType t);

struct ClassifyOptions {
  // sign changes of lambda - lambda_* with |lambda - lambda_*| below
  // chatter * lambda_* are ignored when offsets are not exact
  double chatter = 1e-9;
  double min_beta_coverage = 30.0;
};

struct ClassificationReport {
  DiagramType type = DiagramType::Undetermined;
  double lambda_star = 0.0;
  double lambda_extremal = 0.0;
  std::vector<TurningPoint> turning_points;
  int oscillation_count = 0;
  int late_oscillation_count = 0;
  bool extremal_bounded = true;
  double beta_min = 0.0, beta_max = 0.0;
  std::vector<std::string> evidence;
};

// Throws ValidationError when the curve does not reach beta = 30.
ClassificationReport classify(const ProblemConfig& cfg, const BifurcationCurve& curve, double lambda_star,
                              const ClassifyOptions& opts = {});

// Strict sign changes of v(., beta) - V_* on [r_start, 1].
inline constexpr int kZeroNumberGrid = 8192;
int zero_number(const ProblemConfig& cfg, double beta, const RadialProfile& singular_profile);

struct SeparationResult {
  double min_gap_v;
  double min_gap_weighted;
  double r_h;
  bool hypotheses_checked;   // false outside N = 10, where no sign class applies
};

// Ordering of regular profiles below the comparison radius
// r_h = min(1, sqrt(H/h)). With N = 10 the weight must satisfy
// (a/a_h)' <= 0 and h > 0, otherwise HypothesisError.
SeparationResult check_separation(const ProblemConfig& cfg, double h, double beta, double gamma);

// min over (r_start, 1) of
//   v(r, gamma) + log a - v_0(r, beta) - log(1 + (H + eps0) r^2 / (2(N-2)))
// with v_0 the solution for a = 1. Requires N = 10, (a/a_H)' > 0,
// 0 < beta < gamma, eps0 in [0, 1] and gamma on the minimal branch.
double check_lower_envelope(const ProblemConfig& cfg, double beta, double gamma, double eps0);

}  // namespace gelfand
