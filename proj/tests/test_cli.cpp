// Drives the command-line tool as a subprocess and checks exit codes and the
// machine-readable error output.

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "scdirac_cli_test";

struct Outcome {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome cli(const std::string& args) {
  fs::create_directories(kDir);
  const fs::path out = kDir / "stdout.txt", err = kDir / "stderr.txt";
  const std::string cmd = std::string("\"") + SCDIRAC_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kDir);
  const fs::path p = kDir / name;
  std::ofstream(p) << text;
  return p;
}

json error_of(const Outcome& o) { return json::parse(o.err)["error"]; }

}  // namespace

TEST_CASE("scenarios lists the presets") {
  const Outcome o = cli("scenarios");
  CHECK(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j.size() >= 5);
}

TEST_CASE("identities succeeds and reports") {
  const Outcome o = cli("identities --seed 3 --points 2");
  CHECK(o.code == 0);
  const json j = json::parse(o.out);
  CHECK(j["passed"] == true);
  CHECK(j["seed"] == 3);
}

TEST_CASE("identity residual above threshold exits 4") {
  const Outcome o = cli("identities --points 2 --threshold-scale 1e-30");
  CHECK(o.code == 4);
  CHECK(error_of(o)["code"] == 4);
  CHECK(error_of(o)["type"] == "identity_residual");
}

TEST_CASE("config errors exit 2") {
  const fs::path cfg = write_config("nofield.json", R"({"mode": "classical", "initial": {"q": [0,0,0], "p": [0,0,0]}})");
  const Outcome o = cli("run --config \"" + cfg.string() + "\" --out \"" + (kDir / "o").string() + "\"");
  CHECK(o.code == 2);
  CHECK(error_of(o)["type"] == "config_error");
  CHECK(error_of(o)["message"].get<std::string>().find("field") != std::string::npos);

  const Outcome missing = cli("run --config \"" + (kDir / "absent.json").string() + "\"");
  CHECK(missing.code == 2);

  const Outcome usage = cli("run");
  CHECK(usage.code == 2);
  CHECK(error_of(usage)["type"] == "usage_error");
}

TEST_CASE("numerical failure exits 3") {
  const fs::path cfg = write_config("blowup.json", R"({
    "mode": "classical",
    "field": {"kind": "custom_polynomial", "phi": [{"coeff": 1e300, "power": [4, 0, 0]}]},
    "initial": {"q": [10, 0, 0], "p": [0, 0, 0]},
    "integrator": {"dt": 0.01, "t_final": 1.0}
  })");
  const Outcome o = cli("run --config \"" + cfg.string() + "\" --out \"" + (kDir / "o").string() + "\"");
  CHECK(o.code == 3);
  CHECK(error_of(o)["type"] == "numerical_error");
}

TEST_CASE("run writes into the requested directory") {
  const fs::path cfg = write_config("spin.json", R"({
    "mode": "spin",
    "field": {"kind": "uniform_B", "B": [0, 0, 1]},
    "initial": {"q": [0, -1, 0], "p": [0.5, 0, 0], "spin_axis": [1, 0, 0]},
    "integrator": {"dt": 0.01, "t_final": 0.5}
  })");
  const fs::path out = kDir / "spin_out";
  fs::remove_all(out);
  const Outcome o = cli("run --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --plots");
  CHECK(o.code == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "orbit.svg"));
  CHECK(json::parse(o.out)["mode"] == "spin");
}
