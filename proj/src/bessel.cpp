#include "gelfand/bessel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gelfand/error.hpp"

namespace gelfand {
namespace {

constexpr double kSeriesLimit = 16.0;

// sum_k (-x^2/4)^k / (k! (k+nu)!)
long double power_series(long double x, int nu) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  for (int i = 1; i <= nu; ++i) term *= 0.5L * x / i;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-22L * (1.0L + std::fabs(sum)) && k > 2) break;
  }
  return sum;
}

// Hankel expansion J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (2nu+1) pi/4.
double hankel(double x, int nu) {
  const long double mu = 4.0L * nu * nu;
  const long double z = 8.0L * x;
  long double p = 1.0L, q = 0.0L;
  long double term = 1.0L;
  long double last = 1e300L;
  for (int k = 1; k < 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (k * z);
    if (std::fabs(term) > last) break;
    last = std::fabs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (last < 1e-20L) break;
  }
  const long double chi = x - (2.0L * nu + 1.0L) * std::numbers::pi_v<long double> / 4.0L;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

double zero_uncached(int k) {
  const double b = (k - 0.25) * std::numbers::pi;
  const double guess = b + 1.0 / (8.0 * b) - 124.0 / (3.0 * std::pow(8.0 * b, 3));
  double lo = guess - 0.25, hi = guess + 0.25;
  double flo = bessel_j0(lo);
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = bessel_j0(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double bessel_j0(double x) {
  x = std::fabs(x);
  if (x < kSeriesLimit) return static_cast<double>(power_series(x, 0));
  return hankel(x, 0);
}

double bessel_j1(double x) {
  const double s = x < 0.0 ? -1.0 : 1.0;
  x = std::fabs(x);
  if (x < kSeriesLimit) return s * static_cast<double>(power_series(x, 1));
  return s * hankel(x, 1);
}

double j0_zero(int k) {
  if (k < 1 || k > kMaxBesselZero) {
    throw ValidationError("j0_zero: index " + std::to_string(k) + " outside [1, 64]");
  }
  static const std::array<double, kMaxBesselZero> zeros = [] {
    std::array<double, kMaxBesselZero> z{};
    for (int i = 0; i < kMaxBesselZero; ++i) z[i] = zero_uncached(i + 1);
    return z;
  }();
  return zeros[k - 1];
}

double hardy_constant() {
  const double j = j0_zero(1);
  return j * j;
}

}  // namespace gelfand
