#pragma once

#include <vector>

namespace gelfand {

// Output sampling: geometric with the given ratio from the first radius
// until the geometric step reaches `uniform_step`, then uniform up to R.
struct GridSpec {
  double ratio = 1.005;
  double uniform_step = 0.002;
};

// Throws ValidationError unless 1 < ratio <= 1.05 and 0 < uniform_step <= 0.05.
void validate(const GridSpec& spec);

// Strictly increasing radii from r_first to R (both included exactly).
std::vector<double> make_output_grid(double r_first, double R, const GridSpec& spec);

// n equispaced points on [a, b], endpoints exact.
std::vector<double> linspace(double a, double b, int n);

}  // namespace gelfand
