#include "gelfand/quadrature.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "gelfand/error.hpp"

namespace gelfand {
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 5 || y.size() != n) throw ValidationError("cumulative_integral: need >= 5 matching samples");
  // 3-point Gauss-Legendre on [0, 1], exact for the quartic interpolant
  static constexpr std::array<double, 3> gx = {0.11270166537925831, 0.5, 0.88729833462074169};
  static constexpr std::array<double, 3> gw = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j0 = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const double h = x[i + 1] - x[i];
    double sum = 0.0;
    for (std::size_t g = 0; g < 3; ++g) {
      const double t = x[i] + gx[g] * h;
      double value = 0.0;
      for (std::size_t j = j0; j < j0 + 5; ++j) {
        double basis = 1.0;
        for (std::size_t k = j0; k < j0 + 5; ++k) {
          if (k != j) basis *= (t - x[k]) / (x[j] - x[k]);
        }
        value += basis * y[j];
      }
      sum += gw[g] * value;
    }
    out[i + 1] = out[i] + h * sum;
  }
  return out;
}

double integrate_samples(std::span<const double> x, std::span<const double> y) {
  return cumulative_integral(x, y).back();
}

HermiteInterpolant::HermiteInterpolant(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size()) {
    throw ValidationError("HermiteInterpolant: need >= 2 matching samples");
  }
}

std::size_t HermiteInterpolant::interval(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, x_.size() - 2);
}

double HermiteInterpolant::operator()(double t) const {
  const std::size_t k = interval(t);
  const double h = x_[k + 1] - x_[k];
  const double s = (t - x_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y_[k] + h10 * h * dy_[k] + h01 * y_[k + 1] + h11 * h * dy_[k + 1];
}

double HermiteInterpolant::derivative(double t) const {
  const std::size_t k = interval(t);
  const double h = x_[k + 1] - x_[k];
  const double s = (t - x_[k]) / h;
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
  return d00 * y_[k] + d10 * dy_[k] + d01 * y_[k + 1] + d11 * dy_[k + 1];
}

}  // namespace gelfand
