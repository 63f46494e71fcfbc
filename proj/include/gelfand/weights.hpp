#pragma once

// Radial weights a(r) with a(0) = 1, a > 0 on [0, 1] and a'(0) = 0.
//
// Grammar accepted by parse_weight:
//   const
//   ah:h=<real>                 a(r) = (1 + h r^2 / (2(N-2))) exp(h r^2 / (2N))
//   polyexp:c1,...,ck;d=<real>  a(r) = (1 + sum_i c_i r^(2i)) exp(d r^2)
//
// The ah family depends on the dimension N, so a parsed WeightSpec is bound
// to a dimension before it can be evaluated.

#include <string>
#include <string_view>
#include <vector>

namespace gelfand {

enum class WeightFamily { Constant, AH, PolyExp };

struct WeightSpec {
  WeightFamily family = WeightFamily::Constant;
  double h = 0.0;               // AH only
  std::vector<double> coeffs;   // PolyExp only, c_1..c_k
  double tilt = 0.0;            // PolyExp only, d
  std::string text = "const";   // verbatim spec text
};

// Throws ParseError on grammar violations and ValidationError when a PolyExp
// weight is not positive on the 4096-point sample of [0, 1].
WeightSpec parse_weight(std::string_view text);

struct WeightValue {
  double a;
  double da;
  double d2a;
};

// Number of equispaced samples used for positivity and sign checks.
inline constexpr int kWeightSamples = 4096;

class Weight {
 public:
  // Binds `spec` to dimension N. Throws ValidationError when the AH
  // parameter violates h > -2(N-2) or positivity fails on [0, 1].
  Weight(WeightSpec spec, int dimension);

  static Weight constant(int dimension);
  static Weight ah(double h, int dimension);

  // Valid for r in [0, 5]; beyond r = 1 the family formula is used as the
  // extension.
  WeightValue eval(double r) const;
  double value(double r) const { return eval(r).a; }
  double log_value(double r) const;
  double log_derivative(double r) const;   // a'/a

  double second_derivative_at_origin() const noexcept { return d2a0_; }
  int dimension() const noexcept { return dimension_; }
  const WeightSpec& spec() const noexcept { return spec_; }
  const std::string& text() const noexcept { return spec_.text; }

 private:
  // a = P(r^2) exp(g r^2); P and its r-derivatives.
  struct Poly {
    double p, dp, d2p;
  };
  Poly poly(double r) const;
  double gauss_rate() const noexcept;

  WeightSpec spec_;
  int dimension_;
  double quad_coeff_ = 0.0;   // AH: h / (2(N-2))
  double d2a0_ = 0.0;
};

enum class RatioSign { NonPositiveEverywhere, PositiveEverywhere, Mixed };

const char* to_string(RatioSign s);

// Sign of (a / a_h)' sampled on kWeightSamples points of (0, 1]; values
// within 1e-12 of zero count as non-positive. Requires dimension 10.
RatioSign ratio_derivative_sign(const Weight& w, double reference_h);

// Same, against the critical weight a_H with H = j_{0,1}^2.
RatioSign ratio_derivative_sign(const Weight& w);

}  // namespace gelfand
