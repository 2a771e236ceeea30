// Command-line front end: scenario runs, preset listing and the identity battery.

#include "scdirac/error.hpp"
#include "scdirac/identity_suite.hpp"
#include "scdirac/run_config.hpp"
#include "scdirac/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>

using namespace scdirac;

namespace {

int fail(int code, const std::string& type, const std::string& message) {
  std::cerr << error_json(code, type, message) << '\n';
  return code;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return fail(2, "config_error", e.what());
  } catch (const ArgumentError& e) {
    return fail(2, "argument_error", e.what());
  } catch (const NumericalError& e) {
    return fail(3, "numerical_error", std::string(e.what()) + " (last good time " + std::to_string(e.last_good_time()) + ")");
  } catch (const BandCrossingError& e) {
    return fail(3, "band_crossing", e.what());
  } catch (const std::exception& e) {
    return fail(3, "error", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Dirac dynamics: orbits, spin transport, BMT comparison and grid solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool plots = false;
  auto* run = app.add_subcommand("run", "run the scenario described by a JSON config");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_flag("--plots", plots, "also write SVG plots");

  auto* scenarios = app.add_subcommand("scenarios", "list the built-in scenario presets");

  std::uint64_t seed = 42;
  int points = 50;
  auto* identities = app.add_subcommand("identities", "evaluate the identity battery at random points");
  identities->add_option("--seed", seed, "random seed");
  identities->add_option("--points", points, "number of random phase points");
  double threshold_scale = 1.0;
  identities->add_option("--threshold-scale", threshold_scale, "multiply every identity threshold by this factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage_error", e.what());
  }

  if (*run) {
    return guarded([&] {
      const RunConfig config = load_run_config(config_path);
      const RunResult r = run_scenario(config, out_dir.empty() ? config.output_dir : out_dir, plots);
      std::cout << r.summary_json << '\n';
      if (r.exit_code == 4) return fail(4, "identity_residual", "identity residual above threshold");
      return r.exit_code;
    });
  }
  if (*scenarios) {
    return guarded([&] {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& p : scenario_presets()) {
        nlohmann::ordered_json e;
        e["name"] = p.name;
        e["description"] = p.description;
        e["config"] = nlohmann::ordered_json::parse(run_config_json(p.config));
        list.push_back(e);
      }
      std::cout << list.dump(2) << '\n';
      return 0;
    });
  }
  return guarded([&] {
    const IdentitySuiteReport report = run_identity_suite(seed, points, threshold_scale);
    std::cout << identity_report_json(report) << '\n';
    if (!report.passed()) return fail(4, "identity_residual", "identity residual above threshold");
    return 0;
  });
}
