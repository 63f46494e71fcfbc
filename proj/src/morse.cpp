#include "gelfand/morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "gelfand/error.hpp"
#include "gelfand/hardy.hpp"
#include "gelfand/integrator.hpp"
#include "gelfand/parallel.hpp"
#include "gelfand/quadrature.hpp"

namespace gelfand {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundedStart = 1e-6;
constexpr double kOscillatoryThreshold = 1e-12;

double square(double x) { return x * x; }

// Left end of the log-radius domain and the boundary condition there.
struct Domain {
  double s_min;
  bool dirichlet;   // truncated oscillatory problem
  double robin;     // w_s = robin * w at s_min otherwise
};

struct PhaseRun {
  double theta_end;
  int count;
};

PhaseRun pruefer(const DiskPotential& k2, const Domain& dom, double mu) {
  const double theta0 = dom.dirichlet ? 0.0 : std::atan2(1.0, dom.robin);
  auto rhs = [&](double s, const StateVec<1>& y) -> StateVec<1> {
    const double c = std::cos(y[0]), sn = std::sin(y[0]);
    return {c * c + (k2.q(s) + mu * std::exp(2.0 * s)) * sn * sn};
  };
  // nodes every 0.25 so that the winding guard sees each half turn
  const int pieces = std::max(8, static_cast<int>(std::ceil(-dom.s_min / 0.25)));
  std::vector<double> nodes(pieces + 1);
  for (int i = 0; i <= pieces; ++i) nodes[i] = dom.s_min * (1.0 - static_cast<double>(i) / pieces);
  nodes.back() = 0.0;
  StepControl ctl;
  ctl.rel_tol = 1e-11;
  ctl.abs_tol = 1e-12;
  ctl.max_step = 0.05;
  double theta = theta0;
  double last_turns = -1.0;
  integrate_to_nodes<1>(rhs, dom.s_min, StateVec<1>{theta0}, nodes, ctl,
                        [&](std::size_t, double s, const StateVec<1>& y) {
                          const double turns = std::floor(y[0] / kPi);
                          if (turns < last_turns) {
                            throw IntegrationError("Pruefer phase unwound at s = " + std::to_string(s), s);
                          }
                          last_turns = turns;
                          theta = y[0];
                        });
  // zeros of w in the open interval are the multiples of pi strictly below theta(0)
  const int count = std::max(0, static_cast<int>(std::ceil(theta / kPi)) - 1);
  return {theta, count};
}

// eigenvalue k (1-based) of the Pruefer problem: theta(0; mu) = k pi
double pruefer_eigenvalue(const DiskPotential& k2, const Domain& dom, int k, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-11 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pruefer(k2, dom, mid).theta_end < k * kPi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fd_eigenvalue(const FdPencil& p, int k, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-11 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pencil_count_below(p, mid) < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Domain choose_domain(const DiskPotential& k2, int cap) {
  if (k2.q0 > kOscillatoryThreshold) {
    // enough half turns near the origin to exceed the cap
    const double root = std::sqrt(k2.q0);
    Domain dom{-(kPi * (cap + 2) / root + 4.0), true, 0.0};
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double frac = pruefer(k2, dom, 0.0).theta_end / kPi;
      if (std::fabs(frac - std::round(frac)) > 0.05) break;
      dom.s_min -= 0.25 * kPi / root;
    }
    return dom;
  }
  return {std::log(k2.r_min), false, std::sqrt(std::max(0.0, -k2.q0))};
}

double upper_k2(const DiskPotential& k2, const Domain& dom) {
  double m = 0.0;
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = dom.s_min * (1.0 - static_cast<double>(i) / kSamples);
    m = std::max(m, k2.q(s) * std::exp(-2.0 * s));
  }
  return m;
}

std::vector<double> witness_values(int dimension, double h, int cap) {
  constexpr double eps = 1.0;
  int j0 = 1;
  while (j0 < 64 && !(instability_witness_leq9(dimension, h, eps, j0) < 0.0)) ++j0;
  std::vector<double> out(cap);
  for (int k = 0; k < cap; ++k) out[k] = instability_witness_leq9(dimension, h, eps, j0 + k);
  return out;
}

}  // namespace

RadialPotential RadialPotential::explicit_uh(int dimension, double h) {
  if (dimension < 3) throw ValidationError("ExplicitUh: requires N >= 3");
  if (!(h > -2.0 * (dimension - 2.0))) throw ValidationError("ExplicitUh: requires h > -2(N-2)");
  RadialPotential p;
  p.kind = Kind::ExplicitUh;
  p.dimension = dimension;
  p.h = h;
  p.singular_coefficient = 2.0 * (dimension - 2.0);
  return p;
}

RadialPotential RadialPotential::regular(const ProblemConfig& cfg, const ShootResult& shoot) {
  RadialPotential p;
  p.kind = Kind::Numeric;
  p.dimension = cfg.dimension;
  p.profile = shoot.profile;
  p.weight = cfg.weight;
  p.singular_coefficient = 0.0;
  return p;
}

RadialPotential RadialPotential::singular(const ProblemConfig& cfg, const RadialProfile& singular_profile) {
  RadialPotential p;
  p.kind = Kind::Numeric;
  p.dimension = cfg.dimension;
  p.profile = singular_profile;
  p.weight = cfg.weight;
  p.singular_coefficient = 2.0 * (cfg.dimension - 2.0);
  return p;
}

double RadialPotential::operator()(double r) const {
  const DiskPotential d = reduce_to_disk(*this);
  return d.k2(r) + square(0.5 * (dimension - 2)) / (r * r);
}

DiskPotential constant_disk_potential(double h) {
  DiskPotential d;
  d.dimension = 10;
  d.q0 = 0.0;
  d.r_min = kBoundedStart;
  d.r2k2 = [h](double r) { return h * r * r; };
  d.explicit_h = h;
  return d;
}

DiskPotential reduce_to_disk(const RadialPotential& pot) {
  const int n = pot.dimension;
  const double n2 = n - 2.0;
  const double kappa2 = 0.25 * n2 * n2;
  DiskPotential d;
  d.dimension = n;
  if (pot.kind == RadialPotential::Kind::ExplicitUh) {
    // 2(N-2)/r^2 + h - (N-2)^2/(4 r^2)
    const double c = 2.0 * n2 - kappa2;
    const double h = pot.h;
    d.q0 = c;
    d.r_min = kBoundedStart;
    d.r2k2 = n == 10 ? std::function<double(double)>([h](double r) { return h * r * r; })
                     : std::function<double(double)>([c, h](double r) { return c + h * r * r; });
    d.explicit_h = h;
    return d;
  }

  if (!pot.weight) throw ValidationError("reduce_to_disk: numeric potential without weight");
  const RadialProfile& prof = pot.profile;
  if (prof.size() < 2) throw ValidationError("reduce_to_disk: empty profile");
  const Weight weight = *pot.weight;
  const double r1 = prof.radii.front();

  if (pot.singular_coefficient == 0.0) {
    // r^2 K2 = r^2 a e^v - (N-2)^2/4, v held at its first value below the profile
    auto interp = std::make_shared<HermiteInterpolant>(prof.radii, prof.values, prof.derivs);
    d.q0 = -kappa2;
    d.r_min = r1;
    d.r2k2 = [interp, weight, kappa2, r1](double r) {
      const double v = r <= r1 ? interp->operator()(r1) : (*interp)(std::min(r, interp->back()));
      return r * r * std::exp(weight.log_value(r) + v) - kappa2;
    };
    return d;
  }

  // singular: interpolate the Emden variable w = V + 2 log r - log 2(N-2);
  // r^2 K2 = 2(N-2) expm1(w + log a) + 2(N-2) - (N-2)^2/4
  const double log_c = std::log(2.0 * n2);
  std::vector<double> w(prof.size()), dw(prof.size());
  for (std::size_t i = 0; i < prof.size(); ++i) {
    w[i] = prof.values[i] + 2.0 * std::log(prof.radii[i]) - log_c;
    dw[i] = prof.derivs[i] + 2.0 / prof.radii[i];
  }
  const double d2 = -n2 * weight.second_derivative_at_origin() / (4.0 * (n - 1.0));
  auto interp = std::make_shared<HermiteInterpolant>(prof.radii, std::move(w), std::move(dw));
  const double c = 2.0 * n2 - kappa2;
  d.q0 = std::fabs(c) < kOscillatoryThreshold ? 0.0 : c;
  d.r_min = kBoundedStart;
  d.r2k2 = [interp, weight, n2, c, d2, r1](double r) {
    const double wr = r < r1 ? d2 * r * r : (*interp)(std::min(r, interp->back()));
    return 2.0 * n2 * std::expm1(wr + weight.log_value(r)) + c;
  };
  return d;
}

FdPencil build_fd_pencil(const DiskPotential& k2, double s_min, int nodes, bool dirichlet_left, double robin) {
  if (nodes < 16) throw ValidationError("build_fd_pencil: too few nodes");
  const double ds = -s_min / (nodes - 1);
  // full assembly over nodes 0..nodes-1, then drop the Dirichlet rows
  std::vector<double> ad(nodes, 0.0), ao(nodes - 1, 0.0), md(nodes, 0.0), mo(nodes - 1, 0.0);
  constexpr double xg[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  constexpr double wg[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (int e = 0; e + 1 < nodes; ++e) {
    const double a = s_min + e * ds;
    double p00 = 0.0, p01 = 0.0, p11 = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (int g = 0; g < 3; ++g) {
      const double x = 0.5 * (1.0 + xg[g]);
      const double s = a + x * ds;
      const double w = 0.5 * wg[g] * ds;
      const double q = k2.q(s) * w, m = std::exp(2.0 * s) * w;
      const double f0 = 1.0 - x, f1 = x;
      p00 += q * f0 * f0;
      p01 += q * f0 * f1;
      p11 += q * f1 * f1;
      m00 += m * f0 * f0;
      m01 += m * f0 * f1;
      m11 += m * f1 * f1;
    }
    ad[e] += 1.0 / ds - p00;
    ad[e + 1] += 1.0 / ds - p11;
    ao[e] += -1.0 / ds - p01;
    md[e] += m00;
    md[e + 1] += m11;
    mo[e] += m01;
  }
  ad[0] += robin;
  const int first = dirichlet_left ? 1 : 0;
  const int last = nodes - 2;   // Dirichlet at s = 0
  FdPencil p;
  p.diag.assign(ad.begin() + first, ad.begin() + last + 1);
  p.mass_diag.assign(md.begin() + first, md.begin() + last + 1);
  p.offdiag.assign(ao.begin() + first, ao.begin() + last);
  p.mass_offdiag.assign(mo.begin() + first, mo.begin() + last);
  return p;
}

int pencil_count_below(const FdPencil& p, double sigma) {
  // negative pivots of the LDL^T factorization of A - sigma M
  int count = 0;
  double d = 0.0;
  for (std::size_t k = 0; k < p.diag.size(); ++k) {
    const double a = p.diag[k] - sigma * p.mass_diag[k];
    if (k == 0) {
      d = a;
    } else {
      const double b = p.offdiag[k - 1] - sigma * p.mass_offdiag[k - 1];
      const double prev = d != 0.0 ? d : std::numeric_limits<double>::min();
      d = a - b * b / prev;
    }
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

double tridiagonal_form(const std::vector<double>& diag, const std::vector<double>& off, const std::vector<double>& w) {
  if (w.size() != diag.size()) throw ValidationError("pencil form: size mismatch");
  double q = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    q += diag[k] * w[k] * w[k];
    if (k + 1 < w.size()) q += 2.0 * off[k] * w[k] * w[k + 1];
  }
  return q;
}

}  // namespace

double pencil_form(const FdPencil& p, const std::vector<double>& w) { return tridiagonal_form(p.diag, p.offdiag, w); }

double pencil_mass(const FdPencil& p, const std::vector<double>& w) {
  return tridiagonal_form(p.mass_diag, p.mass_offdiag, w);
}

SpectralReport morse_index(const DiskPotential& k2, int cap) {
  if (cap < 1 || cap > kMaxMorseCap) {
    throw ValidationError("morse_index: cap must lie in [1, " + std::to_string(kMaxMorseCap) + "]");
  }
  const Domain dom = choose_domain(k2, cap);
  const FdPencil pencil = build_fd_pencil(k2, dom.s_min, kFdNodes, dom.dirichlet, dom.robin);

  SpectralReport rep;
  rep.s_min = dom.s_min;
  rep.pruefer_count = pruefer(k2, dom, 0.0).count;
  rep.fd_count = pencil_count_below(pencil, 0.0);
  if (rep.pruefer_count != rep.fd_count) {
    throw MethodDisagreement("morse_index: Pruefer count " + std::to_string(rep.pruefer_count) +
                                 " differs from finite-difference count " + std::to_string(rep.fd_count),
                             rep.pruefer_count, rep.fd_count);
  }

  const int count = rep.pruefer_count;
  if (count >= cap) {
    rep.morse_index = {cap, true};
    rep.stable = false;
    if (k2.explicit_h && k2.dimension >= 3 && k2.dimension <= 9) {
      rep.witnesses = witness_values(k2.dimension, *k2.explicit_h, cap);
    }
    return rep;
  }
  rep.morse_index = {count, false};
  rep.stable = count == 0;

  // eigenvalues below zero by both methods; disjoint brackets run in parallel
  const double lower = -upper_k2(k2, dom) - 1.0;
  std::vector<double> ev_p(count), ev_fd(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    ev_p[i] = pruefer_eigenvalue(k2, dom, k, lower, 0.0);
    ev_fd[i] = fd_eigenvalue(pencil, k, lower, 0.0);
  });
  rep.eigenvalues_below_zero = ev_p;
  for (int i = 0; i < count; ++i) rep.method_gap = std::max(rep.method_gap, std::fabs(ev_p[i] - ev_fd[i]));
  return rep;
}

SpectralReport solution_stability(const ProblemConfig& cfg, const ShootResult& shoot, int cap) {
  return morse_index(reduce_to_disk(RadialPotential::regular(cfg, shoot)), cap);
}

}  // namespace gelfand
