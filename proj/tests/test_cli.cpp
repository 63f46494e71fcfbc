#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

#include "gelfand/bessel.hpp"
#include "gelfand/cli.hpp"
#include "gelfand/io.hpp"

using namespace gelfand;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gelfand");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// exit status and stdout of the installed binary
Run run_binary(const std::string& args) {
  const std::string cmd = std::string(GELFAND_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gelfand_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("trace writes a parseable curve and is reproducible") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv"), svg = scratch("a.svg");
  const Run r1 = run_binary("trace --dim 3 --weight const --beta-min -2 --beta-max 10 --out " + a.string() +
                            " --svg " + svg.string());
  CHECK(r1.code == 0);
  const Run r2 = run_binary("trace --dim 3 --weight const --beta-min -2 --beta-max 10 --out " + b.string());
  CHECK(r2.code == 0);
  const CurveTable t = parse_curve_csv(read_file(a));
  CHECK(t.samples.front().beta == -2.0);
  CHECK(t.samples.back().beta == 10.0);
  CHECK(t.manifest["command"] == "trace");
  CHECK(fs::exists(svg));
  CHECK(read_file(svg).find("<polyline") != std::string::npos);
  // artifact lists differ, the data rows do not
  const std::string ta = read_file(a), tb = read_file(b);
  CHECK(ta.substr(ta.find('\n')) == tb.substr(tb.find('\n')));
  CHECK(run({"trace", "--dim", "3", "--beta-min", "-2", "--beta-max", "10", "--out", a.string()}).code == 0);
  const std::string again = read_file(a);
  CHECK(run({"trace", "--dim", "3", "--beta-min", "-2", "--beta-max", "10", "--out", a.string()}).code == 0);
  CHECK(read_file(a) == again);
}

TEST_CASE("usage errors exit with 2") {
  const std::string out = scratch("u.csv").string();
  CHECK(run_binary("trace --dim 3 --beta-min 4 --beta-max 4 --out " + out).code == 2);
  CHECK(run_binary("trace --dim 3 --bogus 1 --out " + out).code == 2);
  CHECK(run_binary("trace --dim 2 --out " + out).code == 2);
  CHECK(run_binary("trace --dim 3 --weight ah:h= --out " + out).code == 2);
  CHECK(run_binary("trace --dim 3 --max-step 2 --out " + out).code == 2);
  CHECK(run_binary("").code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run_binary("--help").code == 0);
  CHECK(run_binary("spectral morse --help").code == 0);
}

TEST_CASE("spectral morse") {
  Run r = run_binary("spectral morse --dim 10 --h 6");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["morse_index"] == 1);
  CHECK(j["stable"] == false);
  REQUIRE(j["eigenvalues_below_zero"].size() == 1);
  CHECK(j["eigenvalues_below_zero"][0].get<double>() < 0.0);

  r = run({"spectral", "morse", "--dim", "9", "--h", "0", "--cap", "8"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["morse_index"]["capped"] == 8);
  CHECK(j["stable"] == false);
  CHECK(j["witnesses"].size() == 8);

  r = run({"spectral", "morse", "--dim", "10", "--h", "0"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["morse_index"] == 0);
  CHECK(json::parse(r.out)["stable"] == true);

  CHECK(run({"spectral", "morse", "--dim", "10", "--h", "6", "--cap", "0"}).code == 2);
}

TEST_CASE("spectral hardy and witness") {
  const fs::path out = scratch("hardy.json");
  Run r = run({"spectral", "hardy", "--n", "64", "--out", out.string()});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["H"].get<double>() > 5.7831);
  CHECK(j["H"].get<double>() < 5.7832);
  CHECK(j["j01"].get<double>() == doctest::Approx(2.404825557695773));
  REQUIRE(j["R"].size() == 64);
  CHECK(j["R"][63]["R"].get<double>() - j["H"].get<double>() < 0.5);
  CHECK(j["min_R_minus_H"].get<double>() > 0.0);
  CHECK(json::parse(read_file(out)) == j);

  r = run({"spectral", "witness", "--dim", "5", "--h", "0", "--eps", "1", "--j", "3"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["negative"] == true);
  CHECK(j["Q"].get<double>() < 0.0);
}

TEST_CASE("verify subcommands") {
  Run r = run_binary("verify singular --dim 10 --h 40");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);

  r = run({"verify", "pohozaev", "--dim", "5", "--beta", "3", "--mu", "1"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);

  r = run({"verify", "flux", "--dim", "4", "--weight", "ah:h=2", "--beta", "6"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);

  r = run({"verify", "separation", "--dim", "10", "--weight", "ah:h=5.78", "--beta", "2", "--gamma", "5"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);

  // hypothesis violated: (a/a_h)' > 0 for the weight ah:h=10 against h = 5
  r = run({"verify", "separation", "--dim", "10", "--weight", "ah:h=10", "--h", "5", "--beta", "2", "--gamma", "5"});
  CHECK(r.code == 2);
}

TEST_CASE("classify types") {
  Run r = run_binary("classify --dim 10 --weight ah:h=40 --beta-max 40");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["type"] == "III");
  CHECK(j["extremal_bounded"] == true);
  CHECK(j["hypothesis"] == "PositiveEverywhere");
  CHECK(j.contains("manifest"));

  r = run({"classify", "--dim", "10", "--weight", "ah:h=0"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["type"] == "II");

  r = run({"classify", "--dim", "9", "--weight", "const"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["type"] == "I");
  CHECK(j["oscillation_count"].get<int>() >= 2);

  CHECK(run({"classify", "--dim", "3", "--beta-max", "10"}).code == 2);
  CHECK(run({"classify", "--dim", "3", "--format", "yaml"}).code == 2);
}

TEST_CASE("profile command") {
  const fs::path p = scratch("p.csv"), s = scratch("s.csv");
  CHECK(run({"profile", "--dim", "4", "--weight", "ah:h=1", "--beta", "2", "--out", p.string()}).code == 0);
  const ProfileTable t = parse_profile_csv(read_file(p));
  CHECK(t.profile.values.front() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(t.profile.radii.back() == 1.0);
  CHECK(run({"profile", "--dim", "4", "--weight", "ah:h=1", "--singular", "--out", s.string()}).code == 0);
  const ProfileTable u = parse_profile_csv(read_file(s));
  CHECK(u.manifest.contains("lambda_star"));
}
