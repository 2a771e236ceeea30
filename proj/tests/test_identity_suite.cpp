#include "scdirac/error.hpp"
#include "scdirac/identity_suite.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace scdirac;

TEST_CASE("identity battery passes at random points") {
  const IdentitySuiteReport r = run_identity_suite(42, 8);
  CHECK(r.checks.size() == 17);
  for (const auto& c : r.checks) {
    INFO(c.name << " " << c.residual);
    CHECK(c.passed());
  }
  CHECK(r.group_passed("algebra"));
  CHECK(r.group_passed("spin_hamiltonian"));
  CHECK(r.group_passed("framework"));
  CHECK_FALSE(r.group_passed("nonexistent"));
  // finite-difference residuals are visibly nonzero, the analytic ones are at roundoff
  CHECK(r.get("spin_hamiltonian_finite_difference").residual > 1e-12);
  CHECK(r.get("spin_square").residual < 1e-13);
  CHECK_THROWS_AS(r.get("missing"), ArgumentError);
  CHECK_THROWS_AS(run_identity_suite(1, 0), ConfigError);
}

TEST_CASE("identity report is deterministic and parses back") {
  const std::string a = identity_report_json(run_identity_suite(7, 3));
  const std::string b = identity_report_json(run_identity_suite(7, 3));
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j["seed"] == 7);
  CHECK(j["points"] == 3);
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == 17);
  CHECK(j["checks"][0].contains("max_residual"));
  CHECK(identity_report_json(run_identity_suite(8, 3)) != a);
}
