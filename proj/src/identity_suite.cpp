#include "scdirac/identity_suite.hpp"

#include "scdirac/calculus.hpp"
#include "scdirac/dirac_symbol.hpp"
#include "scdirac/error.hpp"
#include "scdirac/multiband.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace scdirac {

bool IdentitySuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

bool IdentitySuiteReport::group_passed(const std::string& group) const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.group != group) continue;
    any = true;
    if (!c.passed()) return false;
  }
  return any;
}

const IdentityCheck& IdentitySuiteReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ArgumentError("no identity check named " + name);
}

FieldConfig random_polynomial_field(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Polynomial phi;
  std::array<Polynomial, 3> a;
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> lin{0, 0, 0};
    lin[i] = 1;
    phi.add(n(rng), lin);
    for (auto& ak : a) ak.add(n(rng), lin);
    for (int j = i; j < 3; ++j) {
      std::array<int, 3> quad{0, 0, 0};
      quad[i] += 1;
      quad[j] += 1;
      phi.add(0.5 * n(rng), quad);
      for (auto& ak : a) ak.add(0.3 * n(rng), quad);
    }
  }
  phi.add(n(rng), {0, 0, 0});
  return FieldConfig::custom_polynomial(phi, a);
}

namespace {

class Battery {
 public:
  void add(const std::string& name, const std::string& group, double threshold) {
    checks_.push_back({name, group, 0.0, threshold});
  }
  void record(const std::string& name, double value) {
    for (auto& c : checks_) {
      if (c.name == name) {
        // a NaN residual fails the check
        c.residual = std::isnan(value) ? std::numeric_limits<double>::infinity() : std::max(c.residual, value);
        return;
      }
    }
    throw ArgumentError("unregistered identity " + name);
  }
  std::vector<IdentityCheck> take() { return std::move(checks_); }

 private:
  std::vector<IdentityCheck> checks_;
};

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-3);
  return v.normalized();
}

}  // namespace

IdentitySuiteReport run_identity_suite(std::uint64_t seed, int points, double threshold_scale) {
  if (points < 1) throw ConfigError("identity suite needs at least one point");
  if (!(threshold_scale > 0.0) || !std::isfinite(threshold_scale)) throw ConfigError("identity threshold scale must be positive");
  const std::vector<std::string> bracket_names = {
      "energy_projection_sandwich", "energy_bracket_rewrite", "product_rule",         "same_band_commutator",
      "cross_band_projection",      "cross_band_commutator",  "cross_band_vanishing", "transport_form"};

  Battery b;
  b.add("spin_square", "algebra", 1e-12);
  b.add("spin_commutes_with_hamiltonian", "algebra", 1e-12);
  b.add("projection_idempotent", "algebra", 1e-12);
  b.add("spectral_sum", "algebra", 1e-12);
  b.add("polarization_chain", "algebra", 1e-12);
  b.add("projection_self_bracket_finite_difference", "algebra", 1e-5);
  b.add("energy_projection_sandwich_analytic", "algebra", 1e-12);
  b.add("spin_hamiltonian_analytic", "spin_hamiltonian", 1e-10);
  b.add("spin_hamiltonian_finite_difference", "spin_hamiltonian", 1e-5);
  for (const auto& n : bracket_names) b.add(n, "framework", 1e-5);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& g = dirac_gammas();
  for (int k = 0; k < points; ++k) {
    const DiracSymbol sym(random_polynomial_field(rng), ParticleParams{});
    const PhasePoint pt{Vec3(normal(rng), normal(rng), normal(rng)), Vec3(normal(rng), normal(rng), normal(rng))};
    const Vec3 a = random_unit(rng);

    const ComplexMatrix4 h = sym.hamiltonian(pt);
    const ComplexMatrix4 s = sym.spin_matrix(a, pt);
    b.record("spin_square", max_abs(ComplexMatrix4(s * s - ComplexMatrix4::Identity())));
    b.record("spin_commutes_with_hamiltonian", max_abs(commutator(h, s)));
    const BandProjections p = sym.projections(pt);
    const BandEnergies e = sym.band_energies(pt);
    b.record("projection_idempotent",
             std::max(max_abs(ComplexMatrix4(p.plus * p.plus - p.plus)), max_abs(ComplexMatrix4(p.minus * p.minus - p.minus))));
    b.record("spectral_sum", max_abs(ComplexMatrix4(e.plus * p.plus + e.minus * p.minus - h)));

    const KinematicState kin = sym.kinematics(pt);
    const double mc = sym.params().mass * sym.params().c;
    const ComplexMatrix4 lhs = (kin.p0 / mc) * p.plus * contract(kin.v, g.gamma) * g.gamma5 * p.plus;
    const ComplexMatrix4 mid = kin.v.norm() * p.plus * sym.spin_matrix(kin.v, pt) * p.plus;
    const ComplexMatrix4 rhs = sym.params().c * p.plus * g.gamma5 * p.plus;
    b.record("polarization_chain", std::max(max_abs(ComplexMatrix4(lhs - mid)), max_abs(ComplexMatrix4(mid - rhs))));

    const MatrixSymbol pp = sym.projection_symbol(Band::electron);
    const CMatrix fd = poisson_bracket(pp, pp, pt, BracketMode::finite_diff);
    b.record("projection_self_bracket_finite_difference", max_abs(CMatrix(fd - CMatrix(sym.curly_pp(pt)))));

    const SymbolJet pj = sym.projection_jet(pt, Band::electron);
    const CMatrix sandwich = pj.value * poisson_bracket(sym.energy_jet(pt, Band::electron), pj) * pj.value;
    b.record("energy_projection_sandwich_analytic", max_abs(sandwich));

    const ComplexMatrix4 closed = sym.spin_hamiltonians(pt).total();
    b.record("spin_hamiltonian_analytic",
             max_abs(ComplexMatrix4(sym.spin_hamiltonian_brackets(pt, Band::electron, BracketMode::analytic) - closed)));
    b.record("spin_hamiltonian_finite_difference",
             max_abs(ComplexMatrix4(sym.spin_hamiltonian_brackets(pt, Band::electron, BracketMode::finite_diff) - closed)));

    const MultibandSymbol mb(sym.hamiltonian_symbol(), BracketMode::finite_diff);
    const IdentityResiduals r = verify_bracket_identities(mb, pt, rng());
    for (const auto& n : bracket_names) b.record(n, r.get(n));
  }
  IdentitySuiteReport report;
  report.seed = seed;
  report.points = points;
  report.checks = b.take();
  for (auto& c : report.checks) c.threshold *= threshold_scale;
  return report;
}

std::string identity_report_json(const IdentitySuiteReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["points"] = report.points;
  j["passed"] = report.passed();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["group"] = c.group;
    e["max_residual"] = c.residual;
    e["threshold"] = c.threshold;
    e["passed"] = c.passed();
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j.dump(2);
}

}  // namespace scdirac
