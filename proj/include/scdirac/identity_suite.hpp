#pragma once

// Randomized battery of the algebraic and bracket identities behind the spin
// transport, with pinned thresholds. Shared by the command-line tool and the
// acceptance checks.

#include "scdirac/fields.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace scdirac {

struct IdentityCheck {
  std::string name;
  std::string group;  // algebra, spin_hamiltonian, framework
  double residual = 0.0;  // maximum over the probe points
  double threshold = 0.0;
  bool passed() const { return residual < threshold; }
};

struct IdentitySuiteReport {
  std::uint64_t seed = 0;
  int points = 0;
  std::vector<IdentityCheck> checks;

  bool passed() const;
  bool group_passed(const std::string& group) const;
  const IdentityCheck& get(const std::string& name) const;
};

/// Quadratic phi and A with normal(0, scale) coefficients, so E and B vary in space.
FieldConfig random_polynomial_field(std::mt19937_64& rng, double scale = 0.3);

/// Evaluates every identity at `points` random phase points, each with its own
/// random field, all drawn from `seed`. Every threshold is multiplied by
/// `threshold_scale`; values below 1 tighten the battery.
IdentitySuiteReport run_identity_suite(std::uint64_t seed, int points, double threshold_scale = 1.0);

std::string identity_report_json(const IdentitySuiteReport& report);

}  // namespace scdirac
