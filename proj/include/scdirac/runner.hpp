#pragma once

#include "scdirac/run_config.hpp"

#include <string>
#include <vector>

namespace scdirac {

struct RunResult {
  int exit_code = 0;  // 0, or 4 when the identity battery fails
  std::vector<std::string> files;  // written artifacts, relative to the output directory
  std::string summary_json;
};

/// Executes the configured mode and writes its CSV/JSON (and SVG with `plots`)
/// into `out_dir`, which is created if needed. Library errors propagate.
RunResult run_scenario(const RunConfig& config, const std::string& out_dir, bool plots = false);

/// {"error": {"code", "type", "message"}} for failures reported by the tool.
std::string error_json(int code, const std::string& type, const std::string& message);

}  // namespace scdirac
