#include "gelfand/weights.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "gelfand/bessel.hpp"
#include "gelfand/error.hpp"

namespace gelfand {
namespace {

double parse_real(std::string_view token, std::string_view context) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (token.empty()) throw ParseError("weight spec: empty number in " + std::string(context));
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("weight spec: invalid number '" + std::string(token) + "' in " +
                     std::string(context));
  }
  return value + 0.0;  // normalizes -0
}

void check_polyexp_positive(const WeightSpec& spec) {
  for (int i = 0; i <= kWeightSamples; ++i) {
    const double r = static_cast<double>(i) / kWeightSamples;
    const double r2 = r * r;
    double p = 1.0, rk = 1.0;
    for (double c : spec.coeffs) {
      rk *= r2;
      p += c * rk;
    }
    if (!(p > 0.0)) {
      throw ValidationError("weight '" + spec.text + "' is not positive at r = " +
                            std::to_string(r));
    }
  }
}

}  // namespace

WeightSpec parse_weight(std::string_view text) {
  WeightSpec spec;
  spec.text = std::string(text);
  if (text == "const") {
    spec.family = WeightFamily::Constant;
    return spec;
  }
  constexpr std::string_view ah_prefix = "ah:h=";
  if (text.starts_with(ah_prefix)) {
    spec.family = WeightFamily::AH;
    spec.h = parse_real(text.substr(ah_prefix.size()), text);
    return spec;
  }
  constexpr std::string_view pe_prefix = "polyexp:";
  if (text.starts_with(pe_prefix)) {
    spec.family = WeightFamily::PolyExp;
    std::string_view rest = text.substr(pe_prefix.size());
    const auto semi = rest.find(';');
    if (semi == std::string_view::npos) throw ParseError("weight spec: missing ';d=' in '" + spec.text + "'");
    std::string_view list = rest.substr(0, semi);
    std::string_view tail = rest.substr(semi + 1);
    if (!tail.starts_with("d=")) throw ParseError("weight spec: expected 'd=' in '" + spec.text + "'");
    spec.tilt = parse_real(tail.substr(2), text);
    if (list.empty()) throw ParseError("weight spec: empty coefficient list in '" + spec.text + "'");
    while (true) {
      const auto comma = list.find(',');
      spec.coeffs.push_back(parse_real(list.substr(0, comma), text));
      if (comma == std::string_view::npos) break;
      list = list.substr(comma + 1);
    }
    check_polyexp_positive(spec);
    return spec;
  }
  throw ParseError("weight spec: unrecognized '" + spec.text +
                   "' (expected const | ah:h=<real> | polyexp:c1,...,ck;d=<real>)");
}

Weight::Weight(WeightSpec spec, int dimension) : spec_(std::move(spec)), dimension_(dimension) {
  if (dimension_ < 3) throw ValidationError("weight: dimension must be >= 3");
  const double n = dimension_;
  switch (spec_.family) {
    case WeightFamily::Constant:
      d2a0_ = 0.0;
      break;
    case WeightFamily::AH:
      if (!(spec_.h > -2.0 * (n - 2.0))) {
        throw ValidationError("weight '" + spec_.text + "': requires h > -2(N-2) = " +
                              std::to_string(-2.0 * (n - 2.0)));
      }
      quad_coeff_ = spec_.h / (2.0 * (n - 2.0));
      d2a0_ = 2.0 * spec_.h * (n - 1.0) / (n * (n - 2.0));
      break;
    case WeightFamily::PolyExp:
      check_polyexp_positive(spec_);
      d2a0_ = 2.0 * ((spec_.coeffs.empty() ? 0.0 : spec_.coeffs.front()) + spec_.tilt);
      break;
  }
}

Weight Weight::constant(int dimension) { return Weight(WeightSpec{}, dimension); }

Weight Weight::ah(double h, int dimension) {
  WeightSpec spec;
  spec.family = WeightFamily::AH;
  spec.h = h + 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, spec.h);
  spec.text = "ah:h=" + std::string(buf, res.ptr);
  return Weight(std::move(spec), dimension);
}

double Weight::gauss_rate() const noexcept {
  switch (spec_.family) {
    case WeightFamily::AH:
      return spec_.h / (2.0 * dimension_);
    case WeightFamily::PolyExp:
      return spec_.tilt;
    case WeightFamily::Constant:
      break;
  }
  return 0.0;
}

Weight::Poly Weight::poly(double r) const {
  switch (spec_.family) {
    case WeightFamily::Constant:
      return {1.0, 0.0, 0.0};
    case WeightFamily::AH:
      return {1.0 + quad_coeff_ * r * r, 2.0 * quad_coeff_ * r, 2.0 * quad_coeff_};
    case WeightFamily::PolyExp: {
      // P(r) = 1 + sum c_i r^(2i)
      double p = 1.0, dp = 0.0, d2p = 0.0;
      const double r2 = r * r;
      double pow_2i = 1.0;  // r^(2i)
      for (std::size_t k = 0; k < spec_.coeffs.size(); ++k) {
        const double i = static_cast<double>(k + 1);
        const double c = spec_.coeffs[k];
        const double prev = pow_2i;  // r^(2i-2)
        pow_2i *= r2;
        p += c * pow_2i;
        dp += c * 2.0 * i * prev * r;
        d2p += c * 2.0 * i * (2.0 * i - 1.0) * prev;
      }
      return {p, dp, d2p};
    }
  }
  return {1.0, 0.0, 0.0};
}

WeightValue Weight::eval(double r) const {
  if (spec_.family == WeightFamily::Constant) return {1.0, 0.0, 0.0};
  const Poly p = poly(r);
  const double g = gauss_rate();
  const double e = std::exp(g * r * r);
  const double de = 2.0 * g * r;                     // E'/E
  const double d2e = 2.0 * g + 4.0 * g * g * r * r;  // E''/E
  return {p.p * e, (p.dp + p.p * de) * e, (p.d2p + 2.0 * p.dp * de + p.p * d2e) * e};
}

double Weight::log_value(double r) const {
  if (spec_.family == WeightFamily::Constant) return 0.0;
  const Poly p = poly(r);
  return std::log1p(p.p - 1.0) + gauss_rate() * r * r;
}

double Weight::log_derivative(double r) const {
  if (spec_.family == WeightFamily::Constant) return 0.0;
  const Poly p = poly(r);
  return p.dp / p.p + 2.0 * gauss_rate() * r;
}

const char* to_string(RatioSign s) {
  switch (s) {
    case RatioSign::NonPositiveEverywhere:
      return "NonPositiveEverywhere";
    case RatioSign::PositiveEverywhere:
      return "PositiveEverywhere";
    case RatioSign::Mixed:
      return "Mixed";
  }
  return "Mixed";
}

RatioSign ratio_derivative_sign(const Weight& w, double reference_h) {
  if (w.dimension() != 10) {
    throw ValidationError("ratio_derivative_sign: the comparison hypothesis is specific to N = 10");
  }
  const Weight ref = Weight::ah(reference_h, w.dimension());
  constexpr double kZeroBand = 1e-12;
  int positive = 0, nonpositive = 0;
  for (int i = 1; i <= kWeightSamples; ++i) {
    const double r = static_cast<double>(i) / kWeightSamples;
    // (a/a_h)' = (a/a_h) (a'/a - a_h'/a_h)
    const double ratio = std::exp(w.log_value(r) - ref.log_value(r));
    const double d = ratio * (w.log_derivative(r) - ref.log_derivative(r));
    if (d > kZeroBand) {
      ++positive;
    } else {
      ++nonpositive;
    }
  }
  if (positive == 0) return RatioSign::NonPositiveEverywhere;
  if (nonpositive == 0) return RatioSign::PositiveEverywhere;
  return RatioSign::Mixed;
}

RatioSign ratio_derivative_sign(const Weight& w) { return ratio_derivative_sign(w, hardy_constant()); }

}  // namespace gelfand
