#pragma once

// Radial Morse index of -Delta - P(r) on the unit ball by reduction to the
// disk: xi = r^{(2-N)/2} w turns the N-dimensional radial form into the
// two-dimensional form int w_r^2 r dr - int K2 w^2 r dr with
// K2 = P - (N-2)^2 / (4 r^2).
//
// In s = log r the disk problem reads -w_ss - q(s) w = mu e^{2s} w with
// q = r^2 K2. Negative Dirichlet eigenvalues are counted by Pruefer
// shooting and by a tridiagonal finite-element discretization; the two counts must
// agree.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gelfand/radial_ode.hpp"

namespace gelfand {

struct RadialPotential {
  enum class Kind { ExplicitUh, Numeric };
  Kind kind = Kind::ExplicitUh;
  int dimension = 10;
  double h = 0.0;             // ExplicitUh
  RadialProfile profile;      // Numeric: values v with P = a e^v
  std::optional<Weight> weight;   // Numeric
  double singular_coefficient = 0.0;   // 2(N-2) for singular solutions, 0 for regular ones

  // P = 2(N-2)/r^2 + h, the linearization at U_h.
  static RadialPotential explicit_uh(int dimension, double h);
  // P = a e^v for a regular shoot.
  static RadialPotential regular(const ProblemConfig& cfg, const ShootResult& shoot);
  // P = a e^{V_*} for a singular profile.
  static RadialPotential singular(const ProblemConfig& cfg, const RadialProfile& singular_profile);

  double operator()(double r) const;
};

struct DiskPotential {
  int dimension = 10;
  // q0 = lim_{r->0} r^2 K2
  double q0 = 0.0;
  // first radius where the potential data is defined
  double r_min = 1e-6;
  // r^2 K2(r) evaluated without the 1/r^2 cancellation
  std::function<double(double r)> r2k2;
  // set for the explicit U_h family; enables instability witnesses
  std::optional<double> explicit_h;

  double k2(double r) const {
    if (explicit_h) return q0 == 0.0 ? *explicit_h : q0 / (r * r) + *explicit_h;
    return r2k2(r) / (r * r);
  }
  double q(double s) const { return r2k2(std::exp(s)); }
};

// K2 = P - (N-2)^2 / (4 r^2).
DiskPotential reduce_to_disk(const RadialPotential& pot);

// Constant residual potential K2 = h (the N = 10 reduction of U_h).
DiskPotential constant_disk_potential(double h);

struct MorseIndex {
  int count = 0;
  bool capped = false;
};

struct SpectralReport {
  MorseIndex morse_index;
  std::vector<double> eigenvalues_below_zero;
  double method_gap = 0.0;
  bool stable = true;
  int pruefer_count = 0;
  int fd_count = 0;
  double s_min = 0.0;          // left end of the log-radius domain
  std::vector<double> witnesses;   // Q values of disjoint negative directions (capped case)
};

inline constexpr int kMaxMorseCap = 32;
inline constexpr int kFdNodes = 8192;

// Throws MethodDisagreement when the two counts differ and ValidationError
// when cap is outside [1, 32].
SpectralReport morse_index(const DiskPotential& k2, int cap);

// Morse index of a regular solution in the radial class.
SpectralReport solution_stability(const ProblemConfig& cfg, const ShootResult& shoot, int cap = kMaxMorseCap);

// Tridiagonal pencil (A, M) of the discretized disk problem on a uniform
// s-grid: continuous piecewise-linear elements with consistent mass, so
// every discrete eigenvalue bounds the corresponding continuous one from
// above. Row k couples to row k + 1 through the off-diagonals.
struct FdPencil {
  std::vector<double> diag, offdiag;             // A
  std::vector<double> mass_diag, mass_offdiag;   // M
};
FdPencil build_fd_pencil(const DiskPotential& k2, double s_min, int nodes, bool dirichlet_left, double robin);
// Number of eigenvalues of A w = sigma M w below sigma (inertia of A - sigma M).
int pencil_count_below(const FdPencil& p, double sigma);
// w^T A w and w^T M w.
double pencil_form(const FdPencil& p, const std::vector<double>& w);
double pencil_mass(const FdPencil& p, const std::vector<double>& w);

}  // namespace gelfand
