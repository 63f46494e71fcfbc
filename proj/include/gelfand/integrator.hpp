#pragma once

// Dormand-Prince 5(4) with PI step control. The integrator lands exactly on
// every requested node; no dense output is used.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <limits>
#include <span>
#include <string>

#include "gelfand/error.hpp"

namespace gelfand {

struct StepControl {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 5'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
};

template <std::size_t Dim>
using StateVec = std::array<double, Dim>;

// Error weight of component i: abs_tol + rel_tol * max(|y_i|, |y_new_i|).
struct MixedScale {
  template <std::size_t Dim>
  double operator()(std::size_t i, const StateVec<Dim>& y, const StateVec<Dim>& ynew,
                    const StepControl& ctl) const {
    return ctl.abs_tol + ctl.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
  }
};

namespace detail {

struct Dopri5Tableau {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

// Integrates y' = rhs(t, y) from (t0, y0) through the increasing `nodes`
// (all > t0 except that nodes[0] may equal t0) and calls observe(i, t, y) at
// each node. Throws IntegrationError on step-size underflow, non-finite
// states or exhaustion of max_steps; the error carries
// the last accepted t. `weight` gives the per-component error scale.
template <std::size_t Dim, class Rhs, class Observer, class Scale = MixedScale>
IntegrationStats integrate_to_nodes(Rhs&& rhs, double t0, StateVec<Dim> y0, std::span<const double> nodes,
                                    const StepControl& ctl, Observer&& observe, Scale weight = {}) {
  using T = detail::Dopri5Tableau;
  using V = StateVec<Dim>;
  IntegrationStats stats;
  if (nodes.empty()) return stats;

  auto axpy = [](const V& y, double h, std::initializer_list<std::pair<double, const V*>> terms) {
    V out = y;
    for (const auto& [c, k] : terms) {
      for (std::size_t i = 0; i < Dim; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
  };
  auto scale = [&](const V& a, const V& b, std::size_t i) { return weight(i, a, b, ctl); };

  double t = t0;
  V y = y0;
  V k1 = rhs(t, y);

  // initial step (Hairer, Norsett & Wanner II.4)
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sc = scale(y, y, i);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / Dim);
    d1 = std::sqrt(d1 / Dim);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, nodes.back() - t0);
    const V y1 = axpy(y, h0, {{1.0, &k1}});
    const V f1 = rhs(t + h0, y1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sc = scale(y, y, i);
      d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / Dim) / h0;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min({100.0 * h0, h1, ctl.max_step});
  }

  double err_prev = 1e-4;
  std::size_t next = 0;
  if (nodes[0] <= t) {
    observe(std::size_t{0}, t, static_cast<const V&>(y));
    next = 1;
  }
  long steps = 0;
  while (next < nodes.size()) {
    const double target = nodes[next];
    bool lands = false;
    double step = std::min(h, ctl.max_step);
    if (t + step >= target || target - (t + step) < 1e-12 * std::fabs(target - t)) {
      step = target - t;
      lands = true;
    }
    if (!(step > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t)))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
    }
    if (++steps > ctl.max_steps) throw IntegrationError("step budget exhausted at t = " + std::to_string(t), t);

    const V k2 = rhs(t + T::c2 * step, axpy(y, step, {{T::a21, &k1}}));
    const V k3 = rhs(t + T::c3 * step, axpy(y, step, {{T::a31, &k1}, {T::a32, &k2}}));
    const V k4 = rhs(t + T::c4 * step, axpy(y, step, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const V k5 = rhs(t + T::c5 * step,
                     axpy(y, step, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const V k6 = rhs(t + step, axpy(y, step,
                                    {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
    const V ynew = axpy(y, step, {{T::a71, &k1}, {T::a73, &k3}, {T::a74, &k4}, {T::a75, &k5}, {T::a76, &k6}});
    const double tnew = lands ? target : t + step;
    const V k7 = rhs(tnew, ynew);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double e = step * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                               T::e6 * k6[i] + T::e7 * k7[i]);
      const double q = e / scale(y, ynew, i);
      err += q * q;
      if (!std::isfinite(ynew[i])) finite = false;
    }
    err = std::sqrt(err / Dim);
    if (!finite || !std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(err, 1e-4);
      const double proposed = step * fac;
      t = tnew;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      // a step shortened to hit a node keeps the unclipped size
      h = (lands && step < h) ? std::max(h, proposed) : proposed;
      if (lands) {
        observe(next, t, static_cast<const V&>(y));
        ++next;
      }
    } else {
      ++stats.rejected;
      const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h = step * fac;
    }
  }
  return stats;
}

}  // namespace gelfand
