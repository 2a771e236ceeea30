#pragma once

#include <string>

namespace scdirac {

/// Shortest text that reads back to the same double; identical across runs.
std::string fmt_double(double x);

}  // namespace scdirac
