#include "gelfand/cli.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gelfand/bessel.hpp"
#include "gelfand/bifurcation.hpp"
#include "gelfand/error.hpp"
#include "gelfand/grid.hpp"
#include "gelfand/hardy.hpp"
#include "gelfand/io.hpp"
#include "gelfand/morse.hpp"
#include "gelfand/radial_ode.hpp"
#include "gelfand/svg.hpp"

namespace gelfand {
namespace {

using nlohmann::ordered_json;

// Rejected input detected after flag parsing.
struct UsageError : Error {
  using Error::Error;
};

struct ProblemFlags {
  int dim = 3;
  std::string weight = "const";
  double rtol = 1e-11;
  double atol = 1e-13;

  void add(CLI::App* app, bool weight_flag = true) {
    app->add_option("--dim", dim, "dimension N")->required();
    if (weight_flag) app->add_option("--weight", weight, "const | ah:h=X | polyexp:c1,...;d=X")->capture_default_str();
    app->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
    app->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
  }

  ProblemConfig config() const {
    ProblemConfig cfg(dim, Weight(parse_weight(weight), dim));
    cfg.rel_tol = rtol;
    cfg.abs_tol = atol;
    cfg.validate();
    return cfg;
  }
};

struct CurveFlags {
  ProblemFlags problem;
  double beta_min = -5.0;
  double beta_max = 40.0;
  double max_step = 0.25;

  void add(CLI::App* app) {
    problem.add(app);
    app->add_option("--beta-min", beta_min, "first beta")->capture_default_str();
    app->add_option("--beta-max", beta_max, "last beta")->capture_default_str();
    app->add_option("--max-step", max_step, "largest beta spacing, in (0, 1]")->capture_default_str();
  }

  void validate() const {
    if (!(beta_min < beta_max)) throw UsageError("--beta-min must be smaller than --beta-max");
    if (beta_min < kBetaMin || beta_max > kBetaMax) {
      throw UsageError("beta range must lie in [" + format_double(kBetaMin) + ", " + format_double(kBetaMax) + "]");
    }
    if (!(max_step > 0.0 && max_step <= 1.0)) throw UsageError("--max-step must lie in (0, 1]");
  }
};

void emit_json(const ordered_json& j, const std::string& path, std::ostream& out) {
  const std::string text = dump(j);
  if (!path.empty()) write_file_atomic(path, text);
  out << text;
}

ordered_json pass_entry(double value, double tolerance, bool pass) {
  ordered_json j;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j;
}

int trace(const CurveFlags& f, const std::string& out_path, const std::string& svg_path, std::ostream& err) {
  f.validate();
  const ProblemConfig cfg = f.problem.config();
  const BifurcationCurve curve = trace_curve(cfg, f.beta_min, f.beta_max, f.max_step);
  if (curve.truncated) {
    err << "gelfand trace: integrator failure: " << curve.diagnostic << "\n";
    std::error_code ec;
    std::filesystem::remove(std::filesystem::path(out_path + ".tmp"), ec);
    return kExitIntegration;
  }
  RunManifest m = make_manifest("trace", cfg, f.beta_min, f.beta_max);
  m.extra["max_step"] = f.max_step;
  m.artifacts.push_back(out_path);
  if (!svg_path.empty()) m.artifacts.push_back(svg_path);
  write_file_atomic(out_path, curve_csv(curve, m));
  if (!svg_path.empty()) write_file_atomic(svg_path, curve_svg(curve, m));
  return kExitOk;
}

int classify_cmd(const CurveFlags& f, const std::string& format, const std::string& out_path, bool strict,
                 std::ostream& out, std::ostream& err) {
  f.validate();
  if (format != "json") throw UsageError("--format supports only json");
  const ProblemConfig cfg = f.problem.config();
  const SingularResult sing = integrate_singular(cfg);
  const BifurcationCurve curve = trace_curve(cfg, f.beta_min, f.beta_max, f.max_step);
  if (curve.truncated) {
    err << "gelfand classify: integrator failure: " << curve.diagnostic << "\n";
    return kExitIntegration;
  }
  const ClassificationReport rep = classify(cfg, curve, sing.lambda_star);
  ordered_json j = to_json(rep, cfg);
  if (cfg.dimension == 10) j["hypothesis"] = to_string(ratio_derivative_sign(cfg.weight));
  RunManifest m = make_manifest("classify", cfg, f.beta_min, f.beta_max);
  m.extra["max_step"] = f.max_step;
  if (!out_path.empty()) m.artifacts.push_back(out_path);
  j["manifest"] = m.to_json();
  emit_json(j, out_path, out);
  if (strict && rep.type == DiagramType::Undetermined) return kExitIntegration;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial bifurcation diagrams of -Delta u = lambda a(|x|) e^u on the unit ball", "gelfand"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  std::string out_path;

  // trace
  CurveFlags trace_flags;
  std::string svg_path;
  std::string trace_out;
  auto* trace_app = app.add_subcommand("trace", "sample the bifurcation curve into CSV");
  trace_flags.add(trace_app);
  trace_app->add_option("--out", trace_out, "curve CSV path")->required();
  trace_app->add_option("--svg", svg_path, "optional SVG plot of alpha against lambda");

  // classify
  CurveFlags classify_flags;
  std::string format = "json";
  bool strict = false;
  auto* classify_app = app.add_subcommand("classify", "classify the diagram as Type I, II or III");
  classify_flags.add(classify_app);
  classify_app->add_option("--format", format, "output format")->capture_default_str();
  classify_app->add_option("--out", out_path, "also write the JSON report here");
  classify_app->add_flag("--strict", strict, "exit 3 when the type is Undetermined");

  // profile
  ProblemFlags profile_flags;
  double profile_beta = 0.0;
  bool profile_singular = false;
  std::string profile_out;
  auto* profile_app = app.add_subcommand("profile", "write a regular or singular profile as CSV");
  profile_flags.add(profile_app);
  profile_app->add_option("--beta", profile_beta, "shooting value v(0)");
  profile_app->add_flag("--singular", profile_singular, "write the singular solution instead");
  profile_app->add_option("--out", profile_out, "profile CSV path")->required();

  // verify
  auto* verify_app = app.add_subcommand("verify", "identity and comparison checks");
  verify_app->require_subcommand(1);
  verify_app->add_option("--out", out_path, "also write the JSON report here");
  ProblemFlags vs_flags;
  double vs_h = 0.0;
  auto* v_singular = verify_app->add_subcommand("singular", "closed-form singular family and singular shooting");
  vs_flags.add(v_singular, false);
  v_singular->add_option("--h", vs_h, "parameter of a_h")->required();

  ProblemFlags vp_flags;
  double vp_beta = 0.0, vp_mu = 1.0;
  auto* v_pohozaev = verify_app->add_subcommand("pohozaev", "Pohozaev-type identity with multiplier mu");
  vp_flags.add(v_pohozaev);
  v_pohozaev->add_option("--beta", vp_beta)->required();
  v_pohozaev->add_option("--mu", vp_mu)->capture_default_str();

  ProblemFlags vf_flags;
  double vf_beta = 0.0;
  auto* v_flux = verify_app->add_subcommand("flux", "integrated flux identity");
  vf_flags.add(v_flux);
  v_flux->add_option("--beta", vf_beta)->required();

  ProblemFlags vsep_flags;
  double vsep_beta = 0.0, vsep_gamma = 0.0;
  std::optional<double> vsep_h;
  auto* v_sep = verify_app->add_subcommand("separation", "ordering of regular profiles below r_h");
  vsep_flags.add(v_sep);
  v_sep->add_option("--beta", vsep_beta)->required();
  v_sep->add_option("--gamma", vsep_gamma)->required();
  v_sep->add_option("--h", vsep_h, "comparison parameter (default H)");

  ProblemFlags venv_flags;
  double venv_beta = 0.0, venv_gamma = 0.0, venv_eps = 0.25;
  auto* v_env = verify_app->add_subcommand("envelope", "lower envelope on the minimal branch");
  venv_flags.add(v_env);
  v_env->add_option("--beta", venv_beta)->required();
  v_env->add_option("--gamma", venv_gamma)->required();
  v_env->add_option("--eps0", venv_eps)->capture_default_str();

  // spectral
  auto* spectral_app = app.add_subcommand("spectral", "Morse indices and Hardy quotients");
  spectral_app->require_subcommand(1);
  spectral_app->add_option("--out", out_path, "also write the JSON report here");
  int sm_dim = 10, sm_cap = kMaxMorseCap;
  double sm_h = 0.0;
  auto* s_morse = spectral_app->add_subcommand("morse", "radial Morse index of the explicit singular solution U_h");
  s_morse->add_option("--dim", sm_dim)->required();
  s_morse->add_option("--h", sm_h)->required();
  s_morse->add_option("--cap", sm_cap)->capture_default_str();
  int sh_n = 64;
  auto* s_hardy = spectral_app->add_subcommand("hardy", "H and the quotients R_1..R_n");
  s_hardy->add_option("--n", sh_n)->capture_default_str();
  int sw_dim = 9, sw_j = 12;
  double sw_h = 0.0, sw_eps = 1.0;
  auto* s_witness = spectral_app->add_subcommand("witness", "quadratic form of an instability witness");
  s_witness->add_option("--dim", sw_dim)->required();
  s_witness->add_option("--h", sw_h)->required();
  s_witness->add_option("--eps", sw_eps)->required();
  s_witness->add_option("--j", sw_j)->required();

  // --out given after a leaf subcommand belongs to its parent
  for (auto* parent : {verify_app, spectral_app}) {
    for (auto* leaf : parent->get_subcommands({})) leaf->fallthrough();
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*trace_app) return trace(trace_flags, trace_out, svg_path, err);
    if (*classify_app) return classify_cmd(classify_flags, format, out_path, strict, out, err);

    if (*profile_app) {
      const ProblemConfig cfg = profile_flags.config();
      RunManifest m = make_manifest(profile_singular ? "profile --singular" : "profile", cfg, profile_beta,
                                    profile_beta);
      m.artifacts.push_back(profile_out);
      if (profile_singular) {
        const SingularResult s = integrate_singular(cfg);
        m.extra["lambda_star"] = s.lambda_star;
        write_file_atomic(profile_out, profile_csv(s.profile, m));
      } else {
        if (profile_beta < kBetaMin || profile_beta > kBetaMax) throw UsageError("--beta outside the guardrail");
        const ShootResult s = integrate_ivp(cfg, profile_beta);
        m.extra["lambda"] = s.lambda;
        write_file_atomic(profile_out, profile_csv(s.profile, m));
      }
      return kExitOk;
    }

    if (*verify_app) {
      ordered_json j;
      bool pass = true;
      if (*v_singular) {
        const int n = vs_flags.dim;
        const std::vector<double> grid = [] {
          std::vector<double> g(2048);
          for (int i = 0; i < 2048; ++i) g[i] = std::pow(10.0, -4.0 + 4.0 * i / 2047.0);
          g.back() = 1.0;
          return g;
        }();
        if (n < 3 || n > 10) throw UsageError("verify singular: requires 3 <= N <= 10");
        const double res = residual_Uh(n, vs_h, grid);
        ProblemConfig cfg(n, Weight::ah(vs_h, n));
        cfg.rel_tol = vs_flags.rtol;
        cfg.abs_tol = vs_flags.atol;
        cfg.validate();
        const SingularResult s = integrate_singular(cfg);
        const double lambda_h = 2.0 * (n - 2.0) * std::exp(-vs_h / (2.0 * n));
        double sup = 0.0;
        for (std::size_t i = 0; i < s.profile.size(); ++i) {
          const double r = s.profile.radii[i];
          const double closed = -2.0 * std::log(r) + std::log(2.0 * (n - 2.0)) - vs_h * r * r / (2.0 * n);
          sup = std::max(sup, std::fabs(s.profile.values[i] - closed));
        }
        const double lam_err = std::fabs(s.lambda_star - lambda_h) / lambda_h;
        j["check"] = "singular";
        j["dimension"] = n;
        j["h"] = vs_h;
        j["residual"] = pass_entry(res, 1e-12, res <= 1e-12);
        j["lambda_star"] = s.lambda_star;
        j["lambda_h"] = lambda_h;
        j["lambda_star_relative_error"] = pass_entry(lam_err, 1e-6, lam_err <= 1e-6);
        j["profile_sup_error"] = pass_entry(sup, 1e-6, sup <= 1e-6);
        pass = res <= 1e-12 && lam_err <= 1e-6 && sup <= 1e-6;
      } else if (*v_pohozaev) {
        const ProblemConfig cfg = vp_flags.config();
        const ShootResult s = integrate_ivp(cfg, vp_beta);
        const double res = pohozaev_residual(cfg, s, vp_mu);
        j["check"] = "pohozaev";
        j["dimension"] = cfg.dimension;
        j["weight_spec"] = cfg.weight.text();
        j["beta"] = vp_beta;
        j["mu"] = vp_mu;
        j["residual"] = pass_entry(res, 1e-6, res <= 1e-6);
        pass = res <= 1e-6;
      } else if (*v_flux) {
        const ProblemConfig cfg = vf_flags.config();
        const ShootResult s = integrate_ivp(cfg, vf_beta);
        const double res = flux_residual(cfg, s);
        j["check"] = "flux";
        j["dimension"] = cfg.dimension;
        j["weight_spec"] = cfg.weight.text();
        j["beta"] = vf_beta;
        j["residual"] = pass_entry(res, 1e-6, res <= 1e-6);
        pass = res <= 1e-6;
      } else if (*v_sep) {
        const ProblemConfig cfg = vsep_flags.config();
        const double h = vsep_h.value_or(hardy_constant());
        const SeparationResult s = check_separation(cfg, h, vsep_beta, vsep_gamma);
        j["check"] = "separation";
        j["dimension"] = cfg.dimension;
        j["weight_spec"] = cfg.weight.text();
        j["h"] = h;
        j["beta"] = vsep_beta;
        j["gamma"] = vsep_gamma;
        j["r_h"] = s.r_h;
        j["hypotheses_checked"] = s.hypotheses_checked;
        j["min_gap_v"] = pass_entry(s.min_gap_v, -1e-10, s.min_gap_v > -1e-10);
        j["min_gap_weighted"] = pass_entry(s.min_gap_weighted, -1e-10, s.min_gap_weighted > -1e-10);
        pass = s.min_gap_v > -1e-10 && s.min_gap_weighted > -1e-10;
      } else if (*v_env) {
        const ProblemConfig cfg = venv_flags.config();
        const double gap = check_lower_envelope(cfg, venv_beta, venv_gamma, venv_eps);
        j["check"] = "envelope";
        j["dimension"] = cfg.dimension;
        j["weight_spec"] = cfg.weight.text();
        j["beta"] = venv_beta;
        j["gamma"] = venv_gamma;
        j["eps0"] = venv_eps;
        j["min_gap"] = pass_entry(gap, 0.0, gap > 0.0);
        pass = gap > 0.0;
      }
      j["pass"] = pass;
      emit_json(j, out_path, out);
      return pass ? kExitOk : kExitCheckFailed;
    }

    if (*spectral_app) {
      ordered_json j;
      if (*s_morse) {
        j["dimension"] = sm_dim;
        j["h"] = sm_h;
        j["cap"] = sm_cap;
        try {
          const SpectralReport rep = morse_index(reduce_to_disk(RadialPotential::explicit_uh(sm_dim, sm_h)), sm_cap);
          const ordered_json rj = to_json(rep);
          for (auto& [k, v] : rj.items()) j[k] = v;
        } catch (const MethodDisagreement& e) {
          j["error"] = e.what();
          j["pruefer_count"] = e.sturm_count();
          j["fd_count"] = e.fd_count();
          emit_json(j, out_path, out);
          return kExitCheckFailed;
        }
      } else if (*s_hardy) {
        if (sh_n < 1 || sh_n > 64) throw UsageError("--n must lie in [1, 64]");
        const double H = hardy_constant();
        j["H"] = H;
        j["j01"] = j0_zero(1);
        ordered_json table = ordered_json::array();
        double min_margin = INFINITY;
        for (int n = 1; n <= sh_n; ++n) {
          const double r = hardy_quotient_xi_n(10, n);
          min_margin = std::min(min_margin, r - H);
          table.push_back({{"n", n}, {"R", r}, {"R_minus_H", r - H}});
        }
        j["R"] = table;
        j["min_R_minus_H"] = min_margin;
      } else if (*s_witness) {
        const double q = instability_witness_leq9(sw_dim, sw_h, sw_eps, sw_j);
        j["dimension"] = sw_dim;
        j["h"] = sw_h;
        j["eps"] = sw_eps;
        j["j"] = sw_j;
        j["delta"] = witness_delta(sw_dim, sw_eps);
        j["support"] = {std::exp(-2.0 * std::numbers::pi * (sw_j + 1) / sw_eps),
                        std::exp(-2.0 * std::numbers::pi * sw_j / sw_eps)};
        j["Q"] = q;
        j["negative"] = q < 0.0;
      }
      emit_json(j, out_path, out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "gelfand: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "gelfand: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "gelfand: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IntegrationError& e) {
    err << "gelfand: integrator failure: " << e.what() << "\n";
    return kExitIntegration;
  } catch (const Error& e) {
    err << "gelfand: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace gelfand
