// Wall-clock comparison of the serial and OpenMP grid kernels, the split-step
// propagator and the Weyl observables. Each pair is also checked for identical output.
//
// usage: bench_kernels [n] [repeats]   (2D grid of n x n nodes, default 256)

#include "scdirac/dirac_pde.hpp"
#include "scdirac/fields.hpp"
#include "scdirac/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

using namespace scdirac;

namespace {

double seconds(const std::function<void()>& f, int repeats) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %12.3e %12.3e %8.2fx   %s\n", name, serial, parallel, serial / parallel, same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 256;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  if (n < 16 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_kernels [n >= 16] [repeats >= 1]\n");
    return 2;
  }
  std::printf("grid %d x %d, %d threads, %d repeats\n", n, n, omp_get_max_threads(), repeats);
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");

  GridSpec g;
  g.dim = 2;
  g.n = {n, n};
  g.length = {8.0, 8.0};
  g.eps = 0.1;
  const std::size_t nodes = g.nodes();

  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  std::vector<Complex> psi(4 * nodes);
  for (auto& z : psi) z = {gauss(rng), gauss(rng)};
  kernels::MatrixField m(nodes);
  for (auto& a : m) a = ComplexMatrix4::Random();
  std::vector<Complex> phase(nodes);
  for (auto& z : phase) z = std::polar(1.0, gauss(rng));

  {
    auto a = psi, b = psi;
    const double ts = seconds([&] { kernels::serial::apply_node_matrices(m, a.data()); a = psi; }, repeats);
    const double tp = seconds([&] { kernels::parallel::apply_node_matrices(m, b.data()); b = psi; }, repeats);
    kernels::serial::apply_node_matrices(m, a.data());
    kernels::parallel::apply_node_matrices(m, b.data());
    report("apply_node_matrices", ts, tp, a == b);
  }
  {
    auto a = psi, b = psi;
    const double ts = seconds([&] { kernels::serial::scale_nodes(phase, a.data()); }, repeats);
    const double tp = seconds([&] { kernels::parallel::scale_nodes(phase, b.data()); }, repeats);
    report("scale_nodes", ts, tp, a == b);
  }
  {
    std::vector<double> a(nodes), b(nodes);
    const double ts = seconds([&] { kernels::serial::node_density(psi.data(), nodes, a.data()); }, repeats);
    const double tp = seconds([&] { kernels::parallel::node_density(psi.data(), nodes, b.data()); }, repeats);
    report("node_density", ts, tp, a == b);
  }
  {
    double a = 0, b = 0;
    const double ts = seconds([&] { a = kernels::serial::sum_abs2(psi.data(), psi.size()); }, repeats);
    const double tp = seconds([&] { b = kernels::parallel::sum_abs2(psi.data(), psi.size()); }, repeats);
    report("sum_abs2", ts, tp, a == b);
  }

  const ParticleParams params;
  const DiracSymbol sym(FieldConfig::uniform_b(Vec3(0, 0, 1), Vec3::Zero(), Gauge::landau), params);
  const PreparedPacket packet =
      prepare_gaussian_packet(sym, g, Vec3(0, -1, 0), Vec3::Zero(), std::sqrt(g.eps), Spinor4(1, 0, 0, 0), true);
  {
    const SplitStepper ss(sym, g, 0.01, 2, false), sp(sym, g, 0.01, 2, true);
    GridSpinor a = packet.psi, b = packet.psi;
    const double ts = seconds([&] { ss.step(a); }, repeats);
    const double tp = seconds([&] { sp.step(b); }, repeats);
    report("split_step", ts, tp, a.data == b.data);
  }
  {
    GridObservables a, b;
    const double ts = seconds([&] { a = grid_observables(packet.psi, sym, true, false); }, 1);
    const double tp = seconds([&] { b = grid_observables(packet.psi, sym, true, true); }, 1);
    const bool same = a.band_occupation == b.band_occupation && a.mean_x[0] == b.mean_x[0] && a.s == b.s;
    report("weyl_observables", ts, tp, same);
  }
  return 0;
}
