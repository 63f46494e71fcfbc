#pragma once

// File formats: CSV for curves and profiles, JSON for reports. Every
// artifact begins with the run manifest; CSV carries it as a single
// `# {...}` comment line above the header.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gelfand/bifurcation.hpp"
#include "gelfand/morse.hpp"
#include "gelfand/radial_ode.hpp"

namespace gelfand {

// 17 significant digits, uppercase exponent, locale independent.
std::string format_double(double x);
// Throws ParseError unless the whole field is a number.
double parse_double(std::string_view text);

struct RunManifest {
  std::string command;
  int dimension = 0;
  std::string weight_spec;
  double rel_tol = 0.0, abs_tol = 0.0;
  double beta_min = 0.0, beta_max = 0.0;
  std::vector<std::string> artifacts;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

RunManifest make_manifest(std::string command, const ProblemConfig& cfg, double beta_min, double beta_max);

std::string curve_csv(const BifurcationCurve& curve, const RunManifest& manifest);
std::string profile_csv(const RadialProfile& profile, const RunManifest& manifest);

struct CurveTable {
  nlohmann::ordered_json manifest;
  std::vector<CurveSample> samples;   // log_offset is not stored
};
CurveTable parse_curve_csv(std::string_view text);

struct ProfileTable {
  nlohmann::ordered_json manifest;
  RadialProfile profile;
};
ProfileTable parse_profile_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`; the temporary is
// removed if anything fails.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

nlohmann::ordered_json to_json(const TurningPoint& tp);
nlohmann::ordered_json to_json(const ClassificationReport& rep, const ProblemConfig& cfg);
nlohmann::ordered_json to_json(const SpectralReport& rep);

// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace gelfand
