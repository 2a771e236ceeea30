#include "scdirac/dirac_pde.hpp"
#include "scdirac/error.hpp"
#include "scdirac/semiclassical.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

using namespace scdirac;

namespace {

GridSpec line_grid(int n, double length, double eps) {
  GridSpec g;
  g.dim = 1;
  g.n = {n, 1};
  g.length = {length, 1.0};
  g.eps = eps;
  return g;
}

double distance(const GridSpinor& a, const GridSpinor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

Spinor4 rest_spinor() { return Spinor4(Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)); }

}  // namespace

TEST_CASE("packet preparation") {
  const DiracSymbol sym(FieldConfig::none(), ParticleParams{});
  const GridSpec g = line_grid(256, 16.0, 0.1);
  const PreparedPacket prep = prepare_gaussian_packet(sym, g, {0.5, 0, 0}, {0.8, 0, 0}, 0.6, rest_spinor(), false);
  CHECK(prep.psi.norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(prep.positron_content) < 1e-12);
  const GridObservables obs = grid_observables(prep.psi, sym, true, false);
  CHECK(obs.band_occupation == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(obs.mean_x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(obs.mean_p[0] == doctest::Approx(0.8).epsilon(1e-3));
  // does not fit: position tails
  CHECK_THROWS_AS(prepare_gaussian_packet(sym, g, {7.0, 0, 0}, {0, 0, 0}, 0.6, rest_spinor()), ArgumentError);
  // does not fit: momentum beyond the grid Nyquist momentum eps pi / dx
  CHECK_THROWS_AS(prepare_gaussian_packet(sym, g, {0, 0, 0}, {5.0, 0, 0}, 0.6, rest_spinor()), ArgumentError);
  CHECK_THROWS_AS(prepare_gaussian_packet(sym, g, {0, 0, 0}, {0, 0, 0}, -1.0, rest_spinor()), ArgumentError);
}

TEST_CASE("free split step equals the exact propagator") {
  const ParticleParams params{};
  const DiracSymbol sym(FieldConfig::none(), params);
  const GridSpec g = line_grid(256, 16.0, 0.1);
  const PreparedPacket prep = prepare_gaussian_packet(sym, g, {0, 0, 0}, {1.0, 0, 0}, 0.5, rest_spinor(), false);
  const SplitStepConfig cfg{0.05, 40, 2};
  const GridSpinor split = evolve_split_step(prep.psi, cfg, sym, false);
  const GridSpinor exact = free_propagate(prep.psi, 2.0, params);
  CHECK(distance(split, exact) < 1e-12);
  // the packet centroid moves with the group velocity p / p0
  const GridObservables obs = grid_observables(exact, sym, false);
  CHECK(obs.mean_x[0] == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-2));
  // serial and parallel evolutions agree bitwise
  CHECK(evolve_split_step(prep.psi, cfg, sym, true).data == split.data);
}

TEST_CASE("split step is unitary and second order") {
  const ParticleParams params{};
  const DiracSymbol sym(FieldConfig::harmonic_phi(1.0), params);
  const GridSpec g = line_grid(128, 12.0, 0.2);
  const Spinor4 phi = make_band_spinor(sym, {{0.5, 0, 0}, {0.3, 0, 0}}, Vec3(0, 0, 1));
  const PreparedPacket prep = prepare_gaussian_packet(sym, g, {0.5, 0, 0}, {0.3, 0, 0}, 0.5, phi, false);

  GridSpinor psi = prep.psi;
  const SplitStepper stepper(sym, g, 0.01, 2, true);
  stepper.run(psi, 10000);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-10);

  const double t = 0.8;
  auto run = [&](double dt, int order) {
    const long n = std::lround(t / dt);
    return evolve_split_step(prep.psi, SplitStepConfig{dt, n, order}, sym, true);
  };
  const GridSpinor ref = run(0.0005, 4);
  const double e1 = distance(run(0.02, 2), ref);
  const double e2 = distance(run(0.01, 2), ref);
  const double e3 = distance(run(0.005, 2), ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.05));
  const double f1 = distance(run(0.04, 4), ref);
  const double f2 = distance(run(0.02, 4), ref);
  CHECK(std::log2(f1 / f2) == doctest::Approx(4.0).epsilon(0.1));
  CHECK_THROWS_AS(SplitStepper(sym, g, 0.01, 3), ArgumentError);
  CHECK_THROWS_AS(SplitStepper(sym, g, 0.0, 2), ArgumentError);
}

TEST_CASE("potential and kinetic factors are unitary") {
  // unitarity of each factor shows up as exact norm conservation of single stages
  const DiracSymbol sym(FieldConfig::crossed_eb({0.3, 0, 0}, {0, 0, 1.0}, Gauge::landau), ParticleParams{});
  GridSpec g;
  g.dim = 2;
  g.n = {32, 32};
  g.length = {6.0, 6.0};
  g.eps = 0.3;
  const PreparedPacket prep =
      prepare_gaussian_packet(sym, g, {0, 0, 0}, {0.2, 0.1, 0}, 0.5, make_band_spinor(sym, {{0, 0, 0}, {0.2, 0.1, 0}}, Vec3(1, 0, 0)));
  INFO(prep.positron_content);
  CHECK(std::abs(prep.positron_content) < 0.05);
  GridSpinor psi = prep.psi;
  SplitStepper(sym, g, 0.37, 2, false).run(psi, 50);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("observable and snapshot formats") {
  std::vector<GridObservables> series(2);
  series[0].t = 0.0;
  series[0].mean_x = {0.5, -1.0};
  series[0].has_band = true;
  series[0].band_occupation = 1.0;
  series[1].t = 0.25;
  std::ostringstream out;
  write_observables_csv(out, series, 2);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,mean_x,mean_y,mean_px,mean_py,band_occupation,sx,sy,sz,norm_err");
  std::getline(in, line);
  CHECK(line == "0,0.5,-1,0,0,1,0,0,0,0");
  std::getline(in, line);
  CHECK(line == "0.25,0,0,0,0,,,,,0");

  GridSpinor psi(line_grid(4, 2.0, 0.1));
  psi.node(1)[0] = Complex(0, 2);
  std::ostringstream bin(std::ios::binary);
  write_density_snapshot(bin, psi, 1.5);
  const std::string s = bin.str();
  REQUIRE(s.size() == 12 + 24 + 4 * 8);
  std::int32_t dim;
  std::memcpy(&dim, s.data(), 4);
  CHECK(dim == 1);
  double t, rho1;
  std::memcpy(&t, s.data() + 28, 8);
  std::memcpy(&rho1, s.data() + 36 + 8, 8);
  CHECK(t == 1.5);
  CHECK(rho1 == 4.0);
}

TEST_CASE("convergence study report on a small free setup") {
  ConvergenceSetup s;
  s.fields = FieldConfig::none();
  s.q0 = Vec3(0, 0, 0);
  s.p0 = Vec3(0.5, 0, 0);
  s.eps_list = {0.2, 0.1};
  s.t_final = 0.5;
  s.grid = line_grid(256, 12.0, 0.2);
  s.samples = 2;
  s.parallel = false;
  const ConvergenceReport r = convergence_study(s);
  REQUIRE(r.runs.size() == 2);
  REQUIRE(r.order_x.size() == 1);
  for (const auto& run : r.runs) {
    CHECK(run.series.size() == 3);
    CHECK(run.leak < 1e-10);
    CHECK(run.norm_drift < 1e-10);
    // free packets: the centroid follows the group velocity up to O(eps) spreading effects
    CHECK(run.err_x < 0.05);
  }
  const std::string j = convergence_report_json(r);
  CHECK(j.find("\"0.2\"") != std::string::npos);
  CHECK(j.find("order_estimates") != std::string::npos);
  s.eps_list = {0.1, 0.2};
  CHECK_THROWS_AS(convergence_study(s), ConfigError);
}
