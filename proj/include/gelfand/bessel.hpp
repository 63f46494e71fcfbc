#pragma once

namespace gelfand {

// Bessel functions of the first kind for x >= 0, absolute error <= 1e-12.
double bessel_j0(double x);
double bessel_j1(double x);

inline constexpr int kMaxBesselZero = 64;

// k-th positive zero of J0, 1 <= k <= 64, to 1e-13.
// Throws ValidationError outside that range.
double j0_zero(int k);

// H = j_{0,1}^2, the first Dirichlet eigenvalue of the unit disk.
double hardy_constant();

}  // namespace gelfand
