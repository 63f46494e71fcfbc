#include "gelfand/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace gelfand {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 50;

std::string num(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  return ec == std::errc() ? std::string(buf, end) : std::string("0");
}

std::string tick_label(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 4);
  return ec == std::errc() ? std::string(buf, end) : std::string("?");
}

struct Axis {
  double lo, hi;
  double map(double x, double from, double to) const { return from + (x - lo) / (hi - lo) * (to - from); }
};

Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::fabs(lo)) * 0.05;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

// comment bodies may not contain "--"
std::string comment_safe(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
    out += c;
  }
  return out;
}

}  // namespace

std::string curve_svg(const BifurcationCurve& curve, const RunManifest& manifest) {
  double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin, amin = lmin, amax = -lmin;
  for (const auto& s : curve.samples) {
    lmin = std::min(lmin, s.lambda);
    lmax = std::max(lmax, s.lambda);
    amin = std::min(amin, s.alpha);
    amax = std::max(amax, s.alpha);
  }
  if (curve.samples.empty()) lmin = amin = 0.0, lmax = amax = 1.0;
  const Axis xa = make_axis(lmin, lmax), ya = make_axis(amin, amax);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto X = [&](double l) { return xa.map(l, x0, x1); };
  auto Y = [&](double a) { return ya.map(a, y0, y1); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- " + comment_safe(manifest.to_json().dump()) + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double l = xa.lo + (xa.hi - xa.lo) * k / 5.0;
    const double a = ya.lo + (ya.hi - ya.lo) * k / 5.0;
    out += "<line x1=\"" + num(X(l)) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(X(l)) + "\" y2=\"" + num(y0 + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(X(l)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\">" + tick_label(l) +
           "</text>\n";
    out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(Y(a)) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(Y(a)) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(Y(a) + 4) + "\" text-anchor=\"end\">" + tick_label(a) +
           "</text>\n";
  }
  out += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">lambda</text>\n";
  out += "<text x=\"16\" y=\"" + num(0.5 * (y0 + y1)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(0.5 * (y0 + y1)) + ")\">alpha</text>\n";
  out += "</g>\n";

  out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    if (i) out += ' ';
    out += num(X(curve.samples[i].lambda)) + "," + num(Y(curve.samples[i].alpha));
  }
  out += "\"/>\n";
  for (const auto& tp : curve.turning_points) {
    out += "<circle cx=\"" + num(X(tp.lambda)) + "\" cy=\"" + num(Y(tp.alpha)) + "\" r=\"4\" fill=\"" +
           (tp.kind == TurningKind::Max ? "#c0392b" : "#27ae60") + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gelfand
