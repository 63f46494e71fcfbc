#include "gelfand/grid.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/error.hpp"

namespace gelfand {

void validate(const GridSpec& spec) {
  if (!(spec.ratio > 1.0 && spec.ratio <= 1.05)) {
    throw ValidationError("grid: geometric ratio must lie in (1, 1.05]");
  }
  if (!(spec.uniform_step > 0.0 && spec.uniform_step <= 0.05)) {
    throw ValidationError("grid: uniform step must lie in (0, 0.05]");
  }
}

std::vector<double> make_output_grid(double r_first, double R, const GridSpec& spec) {
  validate(spec);
  if (!(r_first > 0.0 && r_first < R)) throw ValidationError("grid: need 0 < r_first < R");
  std::vector<double> radii;
  const double switch_radius = spec.uniform_step / (spec.ratio - 1.0);
  // geometric part, indexed to avoid accumulated round-off
  const double log_ratio = std::log(spec.ratio);
  for (long i = 0;; ++i) {
    const double r = r_first * std::exp(static_cast<double>(i) * log_ratio);
    if (r >= switch_radius || r >= R) break;
    radii.push_back(r);
  }
  const double start = radii.back();
  const double span = R - start;
  const long m = std::max<long>(1, std::lround(std::ceil(span / spec.uniform_step)));
  for (long j = 1; j < m; ++j) {
    radii.push_back(start + span * static_cast<double>(j) / static_cast<double>(m));
  }
  radii.push_back(R);
  return radii;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  if (n > 0) x.back() = b;
  return x;
}

}  // namespace gelfand
