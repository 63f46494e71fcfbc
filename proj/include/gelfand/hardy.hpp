#pragma once

// Hardy-type quadratic forms on radial test functions of the unit ball.
// Measure constants N omega_N are dropped throughout.

#include <utility>
#include <vector>

namespace gelfand {

// R_n = [int |xi_n'|^2 - ((N-2)^2/4) int xi_n^2 / r^2] / int xi_n^2 for
// xi_n = phi_n(r) J0(j_{0,1} r) r^{(2-N)/2}, phi_n = min(n / (1 - log r), 1).
// Requires N >= 3 and 1 <= n <= 64.
double hardy_quotient_xi_n(int dimension, int n);

inline constexpr int kHardyGridPoints = 1 << 16;
inline constexpr double kHardyInnerCutoff = 1e-12;

// Q_{U_h}(xi_j) for xi_j = r^{(2-N)/2} sin((eps/2) log r) on [r_{j+1}, r_j],
// r_j = exp(-2 pi j / eps). Requires 3 <= N <= 9, eps > 0 with
// delta = 2(N-2) - ((N-2)^2 + eps^2)/4 > 0, j >= 1 and h > -2(N-2).
double instability_witness_leq9(int dimension, double h, double eps, int j);

// delta = 2(N-2) - ((N-2)^2 + eps^2) / 4.
double witness_delta(int dimension, double eps);

// Q_{U_h} of sum_k c_k xi_{j_k}, integrated on the union of supports.
double witness_combination(int dimension, double h, double eps, const std::vector<std::pair<int, double>>& terms);

}  // namespace gelfand
