#include "gelfand/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gelfand/error.hpp"

namespace gelfand {

using nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  std::string s(buf, end);
  for (char& c : s) {
    if (c == 'e') c = 'E';
  }
  return s;
}

double parse_double(std::string_view text) {
  if (text == "NaN") return std::nan("");
  if (text == "Inf") return INFINITY;
  if (text == "-Inf") return -INFINITY;
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["dimension"] = dimension;
  j["weight_spec"] = weight_spec;
  j["tolerances"] = {rel_tol, abs_tol};
  j["beta_range"] = {beta_min, beta_max};
  j["seed_free"] = true;
  j["artifacts"] = artifacts;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

RunManifest make_manifest(std::string command, const ProblemConfig& cfg, double beta_min, double beta_max) {
  RunManifest m;
  m.command = std::move(command);
  m.dimension = cfg.dimension;
  m.weight_spec = cfg.weight.text();
  m.rel_tol = cfg.rel_tol;
  m.abs_tol = cfg.abs_tol;
  m.beta_min = beta_min;
  m.beta_max = beta_max;
  m.extra["r_start"] = cfg.r_start;
  m.extra["grid_ratio"] = cfg.grid.ratio;
  m.extra["grid_uniform_step"] = cfg.grid.uniform_step;
  return m;
}

namespace {

std::string manifest_line(const ordered_json& j) { return "# " + j.dump() + "\n"; }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Manifest, header check and numeric rows.
struct RawTable {
  ordered_json manifest;
  std::vector<std::vector<double>> rows;
};

RawTable parse_table(std::string_view text, std::string_view header) {
  RawTable t;
  bool seen_header = false;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!seen_header && t.manifest.is_null()) {
        try {
          t.manifest = ordered_json::parse(line.substr(1));
        } catch (const nlohmann::json::exception& e) {
          throw ParseError("line " + std::to_string(line_no) + ": bad manifest: " + e.what());
        }
      }
      continue;
    }
    if (!seen_header) {
      if (line != header) {
        throw ParseError("expected header '" + std::string(header) + "', got '" + std::string(line) + "'");
      }
      seen_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    const std::size_t want = split(header, ',').size();
    if (fields.size() != want) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(want) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_double(f));
    t.rows.push_back(std::move(row));
  }
  if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'");
  return t;
}

constexpr std::string_view kCurveHeader = "beta,lambda,alpha,dlambda_dbeta";
constexpr std::string_view kProfileHeader = "r,v,dv_dr";

}  // namespace

std::string curve_csv(const BifurcationCurve& curve, const RunManifest& manifest) {
  ordered_json m = manifest.to_json();
  std::vector<std::size_t> turning_rows;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    if (curve.samples[i].turning) turning_rows.push_back(i);
  }
  m["turning_rows"] = turning_rows;
  m["truncated"] = curve.truncated;
  if (curve.truncated) m["diagnostic"] = curve.diagnostic;
  std::string out = manifest_line(m);
  out += kCurveHeader;
  out += '\n';
  for (const auto& s : curve.samples) {
    out += format_double(s.beta) + ',' + format_double(s.lambda) + ',' + format_double(s.alpha) + ',' +
           format_double(s.dlambda_dbeta) + '\n';
  }
  return out;
}

std::string profile_csv(const RadialProfile& profile, const RunManifest& manifest) {
  ordered_json m = manifest.to_json();
  m["R"] = profile.R;
  std::string out = manifest_line(m);
  out += kProfileHeader;
  out += '\n';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += format_double(profile.radii[i]) + ',' + format_double(profile.values[i]) + ',' +
           format_double(profile.derivs[i]) + '\n';
  }
  return out;
}

CurveTable parse_curve_csv(std::string_view text) {
  RawTable raw = parse_table(text, kCurveHeader);
  CurveTable t;
  t.manifest = std::move(raw.manifest);
  for (const auto& r : raw.rows) t.samples.push_back({r[0], r[1], r[2], r[3], 0.0, false});
  if (t.manifest.is_object() && t.manifest.contains("turning_rows")) {
    for (std::size_t i : t.manifest["turning_rows"].get<std::vector<std::size_t>>()) {
      if (i >= t.samples.size()) throw ParseError("turning row " + std::to_string(i) + " out of range");
      t.samples[i].turning = true;
    }
  }
  return t;
}

ProfileTable parse_profile_csv(std::string_view text) {
  RawTable raw = parse_table(text, kProfileHeader);
  ProfileTable t;
  t.manifest = std::move(raw.manifest);
  for (const auto& r : raw.rows) {
    t.profile.radii.push_back(r[0]);
    t.profile.values.push_back(r[1]);
    t.profile.derivs.push_back(r[2]);
  }
  t.profile.R = t.profile.radii.empty() ? 1.0 : t.profile.radii.back();
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot open " + tmp.string() + " for writing");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.flush();
      if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw Error(std::string("cannot write ") + path.string() + ": " + e.what());
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

ordered_json to_json(const TurningPoint& tp) {
  ordered_json j;
  j["beta"] = tp.beta;
  j["lambda"] = tp.lambda;
  j["alpha"] = tp.alpha;
  j["kind"] = to_string(tp.kind);
  return j;
}

ordered_json to_json(const ClassificationReport& rep, const ProblemConfig& cfg) {
  ordered_json j;
  j["dimension"] = cfg.dimension;
  j["weight_spec"] = cfg.weight.text();
  j["beta_range"] = {rep.beta_min, rep.beta_max};
  j["lambda_star"] = rep.lambda_star;
  j["lambda_extremal"] = rep.lambda_extremal;
  ordered_json tps = ordered_json::array();
  for (const auto& tp : rep.turning_points) tps.push_back(to_json(tp));
  j["turning_points"] = tps;
  j["oscillation_count"] = rep.oscillation_count;
  j["type"] = to_string(rep.type);
  j["extremal_bounded"] = rep.extremal_bounded;
  j["evidence"] = rep.evidence;
  return j;
}

ordered_json to_json(const SpectralReport& rep) {
  ordered_json j;
  if (rep.morse_index.capped) {
    j["morse_index"] = {{"capped", rep.morse_index.count}};
  } else {
    j["morse_index"] = rep.morse_index.count;
  }
  j["eigenvalues_below_zero"] = rep.eigenvalues_below_zero;
  j["method_gap"] = rep.method_gap;
  j["stable"] = rep.stable;
  j["pruefer_count"] = rep.pruefer_count;
  j["fd_count"] = rep.fd_count;
  j["s_min"] = rep.s_min;
  if (!rep.witnesses.empty()) j["witnesses"] = rep.witnesses;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace gelfand
