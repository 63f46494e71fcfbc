#pragma once

#include <span>
#include <vector>

namespace gelfand {

// Cumulative integral of sampled y over a strictly increasing, possibly
// nonuniform x: result[i] = integral from x[0] to x[i]. Each interval is
// integrated with the quartic through the five nearest nodes, so the rule is
// sixth order on smooth data; needs at least 5 nodes.
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> y);

// Integral over the whole of x.
double integrate_samples(std::span<const double> x, std::span<const double> y);

// Piecewise cubic Hermite interpolant through (x, y, dy/dx).
class HermiteInterpolant {
 public:
  HermiteInterpolant(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double t) const;
  double derivative(double t) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t interval(double t) const;
  std::vector<double> x_, y_, dy_;
};

}  // namespace gelfand
