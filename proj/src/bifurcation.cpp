#include "gelfand/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "gelfand/error.hpp"
#include "gelfand/parallel.hpp"

namespace gelfand {
namespace {

constexpr double kRelativeJump = 0.01;
constexpr double kBisectionTol = 1e-8;

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

CurveSample to_sample(const BoundaryData& b) {
  return {b.beta, b.lambda, b.alpha, b.dlambda_dbeta, b.log_offset, false};
}

struct Evaluation {
  std::vector<std::optional<BoundaryData>> data;
  std::optional<double> first_failure;
  std::string message;
};

Evaluation evaluate(const ProblemConfig& cfg, const std::vector<double>& betas) {
  Evaluation ev;
  ev.data.resize(betas.size());
  std::vector<std::string> errors(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) {
    try {
      ev.data[i] = shoot_boundary(cfg, betas[i]);
    } catch (const IntegrationError& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!ev.data[i] && (!ev.first_failure || betas[i] < *ev.first_failure)) {
      ev.first_failure = betas[i];
      ev.message = errors[i];
    }
  }
  return ev;
}

void truncate_at(BifurcationCurve& curve, double beta, const std::string& message) {
  if (curve.truncated && beta >= curve.beta_max) return;
  curve.truncated = true;
  curve.diagnostic = message;
  curve.beta_max = beta;
}

bool needs_split(const CurveSample& a, const CurveSample& b, double max_step) {
  const double width = b.beta - a.beta;
  const bool jump = std::fabs(b.lambda - a.lambda) > kRelativeJump * a.lambda;
  if (jump && width > max_step / 1024.0) return true;
  const bool turn = sgn(a.dlambda_dbeta) * sgn(b.dlambda_dbeta) < 0;
  return turn && width > max_step / 8.0;
}

// Bisection on the sign of dlambda/dbeta, then one secant step.
BoundaryData refine_fold(const ProblemConfig& cfg, BoundaryData lo, BoundaryData hi) {
  const int s_lo = sgn(lo.dlambda_dbeta);
  while (hi.beta - lo.beta > kBisectionTol) {
    const double mid = 0.5 * (lo.beta + hi.beta);
    if (mid <= lo.beta || mid >= hi.beta) break;
    const BoundaryData m = shoot_boundary(cfg, mid);
    const int s = sgn(m.dlambda_dbeta);
    if (s == 0) return m;
    if (s == s_lo) {
      lo = m;
    } else {
      hi = m;
    }
  }
  const double d = hi.dlambda_dbeta - lo.dlambda_dbeta;
  double beta = 0.5 * (lo.beta + hi.beta);
  if (d != 0.0) beta = std::clamp(lo.beta - lo.dlambda_dbeta * (hi.beta - lo.beta) / d, lo.beta, hi.beta);
  const BoundaryData best = shoot_boundary(cfg, beta);
  // keep whichever of the three has the smallest slope
  const BoundaryData* pick = &best;
  for (const BoundaryData* c : {&lo, &hi}) {
    if (std::fabs(c->dlambda_dbeta) < std::fabs(pick->dlambda_dbeta)) pick = c;
  }
  return *pick;
}

}  // namespace

const char* to_string(TurningKind k) { return k == TurningKind::Max ? "Max" : "Min"; }

const char* to_string(DiagramType t) {
  switch (t) {
    case DiagramType::I: return "I";
    case DiagramType::II: return "II";
    case DiagramType::III: return "III";
    case DiagramType::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

BifurcationCurve trace_curve(const ProblemConfig& cfg, double beta_min, double beta_max, double max_step) {
  cfg.validate();
  if (!(beta_min < beta_max)) throw ValidationError("trace_curve: need beta_min < beta_max");
  if (!(max_step > 0.0 && max_step <= 1.0)) throw ValidationError("trace_curve: max_step must lie in (0, 1]");
  if (beta_min < kBetaMin || beta_max > kBetaMax) {
    throw ValidationError("trace_curve: beta range must lie within [-50, 60]");
  }
  BifurcationCurve curve;
  curve.beta_min = beta_min;
  curve.beta_max = beta_max;
  curve.max_step = max_step;
  curve.offsets_exact = has_closed_form_singular(cfg.weight);

  const auto n = static_cast<long>(std::ceil((beta_max - beta_min) / max_step - 1e-12));
  std::vector<double> betas(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) betas[i] = beta_min + (beta_max - beta_min) * static_cast<double>(i) / n;
  betas.back() = beta_max;

  std::vector<CurveSample>& samples = curve.samples;
  auto absorb = [&](const std::vector<double>& bs) {
    Evaluation ev = evaluate(cfg, bs);
    if (ev.first_failure) truncate_at(curve, *ev.first_failure, ev.message);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (ev.data[i] && (!curve.truncated || bs[i] < curve.beta_max)) samples.push_back(to_sample(*ev.data[i]));
    }
    std::sort(samples.begin(), samples.end(), [](const CurveSample& a, const CurveSample& b) { return a.beta < b.beta; });
    if (curve.truncated) {
      std::erase_if(samples, [&](const CurveSample& s) { return s.beta >= curve.beta_max; });
    }
  };
  absorb(betas);

  for (int round = 0; round < 64; ++round) {
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (needs_split(samples[i], samples[i + 1], max_step)) {
        mids.push_back(0.5 * (samples[i].beta + samples[i + 1].beta));
      }
    }
    if (mids.empty()) break;
    absorb(mids);
  }

  // fold refinement, independent per bracket
  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (sgn(samples[i].dlambda_dbeta) * sgn(samples[i + 1].dlambda_dbeta) < 0) brackets.push_back(i);
  }
  std::vector<std::optional<BoundaryData>> folds(brackets.size());
  std::vector<std::string> fold_errors(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t k) {
    const CurveSample& a = samples[brackets[k]];
    const CurveSample& b = samples[brackets[k] + 1];
    try {
      folds[k] = refine_fold(cfg, shoot_boundary(cfg, a.beta), shoot_boundary(cfg, b.beta));
    } catch (const IntegrationError& e) {
      fold_errors[k] = e.what();
    }
  });
  std::vector<CurveSample> turning_samples;
  for (std::size_t k = 0; k < brackets.size(); ++k) {
    if (!folds[k]) {
      truncate_at(curve, samples[brackets[k]].beta, fold_errors[k]);
      continue;
    }
    if (curve.truncated && folds[k]->beta >= curve.beta_max) continue;
    const BoundaryData& f = *folds[k];
    const TurningKind kind = samples[brackets[k]].dlambda_dbeta > 0.0 ? TurningKind::Max : TurningKind::Min;
    curve.turning_points.push_back({f.beta, f.lambda, f.alpha, kind, f.dlambda_dbeta, f.d2lambda_dbeta2});
    turning_samples.push_back(to_sample(f));
    turning_samples.back().turning = true;
  }
  if (curve.truncated) {
    std::erase_if(samples, [&](const CurveSample& s) { return s.beta >= curve.beta_max; });
  }
  for (const CurveSample& ts : turning_samples) {
    if (curve.truncated && ts.beta >= curve.beta_max) continue;
    auto it = std::lower_bound(samples.begin(), samples.end(), ts.beta,
                               [](const CurveSample& s, double b) { return s.beta < b; });
    if (it != samples.end() && it->beta == ts.beta) {
      it->turning = true;
    } else {
      samples.insert(it, ts);
    }
  }
  std::erase_if(curve.turning_points, [&](const TurningPoint& tp) { return curve.truncated && tp.beta >= curve.beta_max; });
  for (std::size_t k = 1; k < curve.turning_points.size(); ++k) {
    if (curve.turning_points[k].kind == curve.turning_points[k - 1].kind) {
      curve.diagnostic += (curve.diagnostic.empty() ? "" : "; ");
      curve.diagnostic += "turning point kinds do not alternate near beta = " +
                          std::to_string(curve.turning_points[k].beta);
    }
  }
  return curve;
}

ClassificationReport classify(const ProblemConfig& cfg, const BifurcationCurve& curve, double lambda_star,
                              const ClassifyOptions& opts) {
  cfg.validate();
  if (curve.samples.size() < 3) throw ValidationError("classify: curve has fewer than 3 samples");
  const double b0 = curve.samples.front().beta, b1 = curve.samples.back().beta;
  if (b1 < opts.min_beta_coverage) {
    throw ValidationError("classify: curve must reach beta = " + std::to_string(opts.min_beta_coverage) +
                          " (reaches " + std::to_string(b1) + ")");
  }
  if (!(lambda_star > 0.0)) throw ValidationError("classify: lambda_star must be positive");

  ClassificationReport rep;
  rep.lambda_star = lambda_star;
  rep.beta_min = b0;
  rep.beta_max = b1;
  rep.turning_points = curve.turning_points;
  for (const CurveSample& s : curve.samples) rep.lambda_extremal = std::max(rep.lambda_extremal, s.lambda);

  const double late_start = b1 - (b1 - b0) / 3.0;
  const double band = curve.offsets_exact ? 0.0 : opts.chatter;
  auto resolved = [&](const CurveSample& s) { return std::fabs(std::expm1(s.log_offset)) > band; };

  // sign changes of lambda - lambda_*, read from the offsets
  const CurveSample* last = nullptr;
  for (const CurveSample& s : curve.samples) {
    if (!resolved(s) || s.log_offset == 0.0) continue;
    if (last && sgn(last->log_offset) != sgn(s.log_offset)) {
      ++rep.oscillation_count;
      if (0.5 * (last->beta + s.beta) >= late_start) ++rep.late_oscillation_count;
    }
    last = &s;
  }

  // monotonicity of lambda (via the offsets) over the whole window and the final third
  auto monotone = [&](double from, int direction, bool strict) {
    const CurveSample* prev = nullptr;
    for (const CurveSample& s : curve.samples) {
      if (s.beta < from) continue;
      if (prev) {
        const double d = (s.log_offset - prev->log_offset) * direction;
        const bool ok = strict ? (curve.offsets_exact ? d > 0.0 : d > -band) : d >= -band;
        if (!ok) return false;
      }
      prev = &s;
    }
    return true;
  };
  const bool increasing = monotone(b0, +1, true);
  const bool late_monotone = monotone(late_start, +1, false) || monotone(late_start, -1, false);
  const std::size_t folds = curve.turning_points.size();

  std::ostringstream ev;
  ev << folds << " turning point(s); " << rep.oscillation_count << " sign change(s) of lambda - lambda_*, "
     << rep.late_oscillation_count << " in the final third [" << late_start << ", " << b1 << "]";
  rep.evidence.push_back(ev.str());
  rep.evidence.push_back(std::string("lambda ") + (increasing ? "strictly increasing" : "not monotone") +
                         " over the window; " + (late_monotone ? "monotone" : "not monotone") +
                         " on the final third");
  rep.evidence.push_back(curve.offsets_exact ? "offsets measured against the closed-form singular solution"
                                             : "offsets measured against the integrated singular solution, "
                                               "chatter band " + std::to_string(band));
  if (curve.truncated) rep.evidence.push_back("curve truncated: " + curve.diagnostic);

  if (folds == 0 && increasing) {
    rep.type = DiagramType::II;
  } else if (rep.oscillation_count >= 3 && rep.late_oscillation_count > 0) {
    rep.type = DiagramType::I;
  } else if (folds >= 1 && rep.late_oscillation_count == 0 && late_monotone) {
    rep.type = DiagramType::III;
  } else {
    rep.type = DiagramType::Undetermined;
    rep.evidence.push_back("window evidence does not match any type rule");
  }
  rep.extremal_bounded = rep.type != DiagramType::II;
  return rep;
}

}  // namespace gelfand
