#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "gelfand/error.hpp"
#include "gelfand/io.hpp"
#include "gelfand/svg.hpp"

using namespace gelfand;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gelfand_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("float formatting: 17 significant digits, uppercase exponent") {
  CHECK(format_double(1.0) == "1.0000000000000000E+00");
  CHECK(format_double(-0.5) == "-5.0000000000000000E-01");
  CHECK(format_double(1e-300) == "1.0000000000000000E-300");
  CHECK(format_double(0.1) == "1.0000000000000001E-01");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-40.0, 40.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(U(rng), static_cast<int>(U(rng) * 10));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(parse_double(format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK(std::isnan(parse_double("NaN")));
  CHECK_THROWS_AS(parse_double("1.0x"), ParseError);
  CHECK_THROWS_AS(parse_double(""), ParseError);
  CHECK(parse_double("+2.5E+01") == 25.0);
}

TEST_CASE("curve CSV round-trip is lossless") {
  ProblemConfig cfg(3, Weight::constant(3));
  const BifurcationCurve c = trace_curve(cfg, -2.0, 6.0, 0.5);
  const RunManifest m = make_manifest("trace", cfg, -2.0, 6.0);
  const std::string text = curve_csv(c, m);
  CHECK(text.rfind("# {", 0) == 0);
  CHECK(text.find("\nbeta,lambda,alpha,dlambda_dbeta\n") != std::string::npos);
  const CurveTable t = parse_curve_csv(text);
  REQUIRE(t.samples.size() == c.samples.size());
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    CHECK(t.samples[i].beta == c.samples[i].beta);
    CHECK(t.samples[i].lambda == c.samples[i].lambda);
    CHECK(t.samples[i].alpha == c.samples[i].alpha);
    CHECK(t.samples[i].dlambda_dbeta == c.samples[i].dlambda_dbeta);
    CHECK(t.samples[i].turning == c.samples[i].turning);
  }
  CHECK(t.manifest["command"] == "trace");
  CHECK(t.manifest["dimension"] == 3);
  CHECK(t.manifest["weight_spec"] == "const");
  CHECK(t.manifest["seed_free"] == true);
  CHECK(t.manifest["turning_rows"].size() == c.turning_points.size());
  // same input, same bytes
  CHECK(curve_csv(c, m) == text);
}

TEST_CASE("profile CSV round-trip is lossless") {
  ProblemConfig cfg(5, Weight::ah(5, 5));
  const ShootResult s = integrate_ivp(cfg, 3.0);
  const std::string text = profile_csv(s.profile, make_manifest("profile", cfg, 3.0, 3.0));
  CHECK(text.find("\nr,v,dv_dr\n") != std::string::npos);
  const ProfileTable t = parse_profile_csv(text);
  CHECK(t.profile.radii == s.profile.radii);
  CHECK(t.profile.values == s.profile.values);
  CHECK(t.profile.derivs == s.profile.derivs);
  CHECK(t.manifest["weight_spec"] == "ah:h=5");
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(parse_curve_csv("beta,lambda\n1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_curve_csv("beta,lambda,alpha,dlambda_dbeta\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_curve_csv("beta,lambda,alpha,dlambda_dbeta\n1,2,3,x\n"), ParseError);
  CHECK_THROWS_AS(parse_curve_csv("# {not json\nbeta,lambda,alpha,dlambda_dbeta\n"), ParseError);
  CHECK_THROWS_AS(parse_profile_csv(""), ParseError);
  CHECK(parse_curve_csv("beta,lambda,alpha,dlambda_dbeta\r\n1,2,3,4\r\n").samples.size() == 1);
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const fs::path p = scratch("atomic.txt");
  write_file_atomic(p, "first\n");
  write_file_atomic(p, "second\n");
  CHECK(read_file(p) == "second\n");
  fs::path tmp = p;
  tmp += ".tmp";
  CHECK_FALSE(fs::exists(tmp));
  CHECK_THROWS_AS(write_file_atomic(scratch("missing_dir") / "x" / "y.txt", "z"), Error);
}

TEST_CASE("report JSON schemas") {
  ProblemConfig cfg(10, Weight::ah(40, 10));
  const BifurcationCurve c = trace_curve(cfg, -5.0, 32.0, 0.5);
  const ClassificationReport rep = classify(cfg, c, integrate_singular(cfg).lambda_star);
  const auto j = to_json(rep, cfg);
  for (const char* key : {"dimension", "weight_spec", "beta_range", "lambda_star", "lambda_extremal",
                          "turning_points", "oscillation_count", "type", "extremal_bounded"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["type"] == "III");
  CHECK(j["extremal_bounded"] == true);
  CHECK(j["weight_spec"] == "ah:h=40");
  REQUIRE(j["turning_points"].size() >= 1);
  for (const char* key : {"beta", "lambda", "alpha", "kind"}) CHECK(j["turning_points"][0].contains(key));
  CHECK(j["turning_points"][0]["kind"] == "Max");

  SpectralReport s;
  s.morse_index = {8, true};
  s.stable = false;
  CHECK(to_json(s)["morse_index"]["capped"] == 8);
  s.morse_index = {1, false};
  s.eigenvalues_below_zero = {-0.2};
  const auto sj = to_json(s);
  CHECK(sj["morse_index"] == 1);
  CHECK(sj.contains("method_gap"));
  CHECK(sj.contains("stable"));
  CHECK(sj["eigenvalues_below_zero"].size() == 1);
}

TEST_CASE("SVG carries the manifest and marks turning points") {
  ProblemConfig cfg(3, Weight::constant(3));
  const BifurcationCurve c = trace_curve(cfg, -5.0, 12.0, 0.25);
  RunManifest m = make_manifest("trace", cfg, -5.0, 12.0);
  const std::string svg = curve_svg(c, m);
  CHECK(svg.find("<!-- {") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
  CHECK(circles == c.turning_points.size());
  CHECK(svg == curve_svg(c, m));
  // comment bodies never contain a double hyphen
  const std::size_t a = svg.find("<!--") + 4, b = svg.find("-->");
  CHECK(svg.substr(a, b - a).find("--") == std::string::npos);
}
