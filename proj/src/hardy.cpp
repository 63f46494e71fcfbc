#include "gelfand/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gelfand/bessel.hpp"
#include "gelfand/error.hpp"
#include "gelfand/quadrature.hpp"

namespace gelfand {
namespace {

struct Sums {
  double grad = 0.0;     // int xi_r^2 r^{N-1}
  double inverse = 0.0;  // int xi^2 r^{N-3}
  double mass = 0.0;     // int xi^2 r^{N-1}
};

// Integrals over [a, b] on a log-uniform grid; w = phi_n phi and xi = r^{-kappa} w.
// The segment lies on one side of the kink; `below` selects phi_n = n / L.
Sums integrate_segment(double a, double b, int points, int n, double kappa, int dimension, bool below) {
  const double j = j0_zero(1);
  std::vector<double> s(points), g(points), inv(points), m(points);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < points; ++i) {
    s[i] = la + (lb - la) * i / (points - 1);
    const double r = i == points - 1 ? b : std::exp(s[i]);
    const double L = 1.0 - std::log(r);
    const double pn = below ? n / L : 1.0;
    const double dpn = below ? n / (L * L * r) : 0.0;
    const double phi = bessel_j0(j * r);
    const double dphi = -j * bessel_j1(j * r);
    const double w = pn * phi;
    const double dw = dpn * phi + pn * dphi;
    const double rk = std::pow(r, -kappa);
    const double xi = rk * w;
    const double dxi = rk * (dw - kappa * w / r);
    // dr = r ds
    g[i] = dxi * dxi * std::pow(r, dimension - 1) * r;
    inv[i] = xi * xi * std::pow(r, dimension - 3) * r;
    m[i] = xi * xi * std::pow(r, dimension - 1) * r;
  }
  return {integrate_samples(s, g), integrate_samples(s, inv), integrate_samples(s, m)};
}

}  // namespace

double hardy_quotient_xi_n(int dimension, int n) {
  if (dimension < 3) throw ValidationError("hardy_quotient_xi_n: requires N >= 3");
  if (n < 1 || n > 64) throw ValidationError("hardy_quotient_xi_n: requires 1 <= n <= 64");
  const double kappa = 0.5 * (dimension - 2);
  const double eps = kHardyInnerCutoff;
  const double kink = std::exp(1.0 - n);

  Sums total;
  auto add = [&](const Sums& p) {
    total.grad += p.grad;
    total.inverse += p.inverse;
    total.mass += p.mass;
  };
  if (kink > eps && kink < 1.0) {
    // split the grid so that the kink is a node, points shared by log length
    const double frac = std::log(kink / eps) / std::log(1.0 / eps);
    const int inner = std::max(1025, static_cast<int>(frac * kHardyGridPoints) | 1);
    const int outer = std::max(1025, static_cast<int>((1.0 - frac) * kHardyGridPoints) | 1);
    add(integrate_segment(eps, kink, inner, n, kappa, dimension, true));
    add(integrate_segment(kink, 1.0, outer, n, kappa, dimension, false));
  } else {
    add(integrate_segment(eps, 1.0, kHardyGridPoints + 1, n, kappa, dimension, kink >= 1.0));
  }

  // Closure on [0, eps] with J0 = 1 there: w = n/L below the kink, w = 1
  // above it, L = 1 - log r. The kappa^2 w^2 / r parts of the two numerator
  // integrals cancel, leaving int w_r^2 r dr - kappa w(eps)^2 with
  // int dr / (r L^4) = 1 / (3 L^3).
  const double n2 = static_cast<double>(n) * n;
  const double l = std::max(1.0 - std::log(eps), static_cast<double>(n));
  const double tail = n2 / (3.0 * l * l * l) - kappa * n2 / (l * l);
  const double numerator = total.grad - kappa * kappa * total.inverse + tail;
  return numerator / total.mass;
}

double witness_delta(int dimension, double eps) {
  const double m = dimension - 2.0;
  return 2.0 * m - (m * m + eps * eps) / 4.0;
}

double witness_combination(int dimension, double h, double eps, const std::vector<std::pair<int, double>>& terms) {
  if (dimension == 10) {
    throw ValidationError("instability witness: N = 10 has delta = -eps^2/4 < 0 for every eps");
  }
  if (dimension < 3 || dimension > 9) throw ValidationError("instability witness: requires 3 <= N <= 9");
  if (!(eps > 0.0)) throw ValidationError("instability witness: requires eps > 0");
  if (!(witness_delta(dimension, eps) > 0.0)) {
    throw ValidationError("instability witness: delta = " + std::to_string(witness_delta(dimension, eps)) +
                          " is not positive");
  }
  if (!(h > -2.0 * (dimension - 2.0))) throw ValidationError("instability witness: requires h > -2(N-2)");
  if (terms.empty()) throw ValidationError("instability witness: no terms");
  const double kappa = 0.5 * (dimension - 2);
  const double period = 2.0 * std::numbers::pi / eps;

  // breakpoints: support ends of every term, t = log r
  std::vector<double> breaks;
  for (const auto& term : terms) {
    if (term.first < 1) throw ValidationError("instability witness: requires j >= 1");
    breaks.push_back(-period * (term.first + 1));
    breaks.push_back(-period * term.first);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // xi = e^{-kappa t} psi(t):  Q = int (psi_t - kappa psi)^2 - 2(N-2) psi^2 - h e^{2t} psi^2 dt
  auto integrand = [&](double t) {
    double psi = 0.0, dpsi = 0.0;
    for (const auto& [j, c] : terms) {
      if (t < -period * (j + 1) || t > -period * j) continue;
      psi += c * std::sin(0.5 * eps * t);
      dpsi += c * 0.5 * eps * std::cos(0.5 * eps * t);
    }
    const double d = dpsi - kappa * psi;
    return d * d - 2.0 * (dimension - 2.0) * psi * psi - h * std::exp(2.0 * t) * psi * psi;
  };
  constexpr int kPointsPerSegment = 4097;
  double q = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    std::vector<double> t(kPointsPerSegment), f(kPointsPerSegment);
    for (int i = 0; i < kPointsPerSegment; ++i) {
      t[i] = breaks[k] + (breaks[k + 1] - breaks[k]) * i / (kPointsPerSegment - 1);
      // evaluate just inside the segment so support ends resolve to this side
      const double inside = std::clamp(t[i], breaks[k] + 1e-12 * period, breaks[k + 1] - 1e-12 * period);
      f[i] = integrand(inside);
    }
    q += integrate_samples(t, f);
  }
  return q;
}

double instability_witness_leq9(int dimension, double h, double eps, int j) {
  return witness_combination(dimension, h, eps, {{j, 1.0}});
}

}  // namespace gelfand
