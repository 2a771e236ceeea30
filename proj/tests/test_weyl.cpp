#include "scdirac/dirac_symbol.hpp"
#include "scdirac/error.hpp"
#include "scdirac/grid.hpp"
#include "scdirac/kernels.hpp"
#include "scdirac/weyl.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace scdirac;

namespace {

const double kPi = std::acos(-1.0);

GridSpec line_grid(int n, double length, double eps) {
  GridSpec g;
  g.dim = 1;
  g.n = {n, 1};
  g.length = {length, 1.0};
  g.eps = eps;
  return g;
}

GridSpinor random_spinor(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  GridSpinor psi(g);
  for (auto& z : psi.data) z = Complex(n(rng), n(rng));
  return psi;
}

// Scalar Gaussian (normalized) times a fixed unit spinor.
GridSpinor gaussian(const GridSpec& g, double q0, double p0, double sigma, const Spinor4& phi) {
  GridSpinor psi(g);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const double x = g.position(i)(0);
    const Complex amp = std::exp(-(x - q0) * (x - q0) / (4 * sigma * sigma)) * std::exp(Complex(0, p0 * x / g.eps));
    for (int c = 0; c < 4; ++c) psi.node(i)[c] = amp * phi(c);
  }
  psi.normalize();
  return psi;
}

Spinor4 unit_spinor() {
  Spinor4 v(Complex(1, 0), Complex(0.3, -0.2), Complex(0, 0.5), Complex(-0.1, 0.1));
  return v / v.norm();
}

double max_diff(const GridSpinor& a, const GridSpinor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  GridSpec g = line_grid(8, 4.0, 0.1);
  CHECK(g.spacing(0) == doctest::Approx(0.5));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-2.0));
  CHECK(g.wavenumber(0, 1) == doctest::Approx(2 * kPi / 4.0));
  CHECK(g.wavenumber(0, 7) == doctest::Approx(-2 * kPi / 4.0));
  CHECK(g.wavenumber(0, 4) == doctest::Approx(-4 * 2 * kPi / 4.0));
  GridSpec bad = g;
  bad.n = {7, 1};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = g;
  bad.eps = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  GridSpec g2;
  g2.dim = 2;
  g2.n = {8, 4};
  g2.length = {4.0, 2.0};
  g2.validate();
  CHECK(g2.nodes() == 32);
  const Vec3 x = g2.position(9);  // ix = 1, iy = 1
  CHECK(x(0) == doctest::Approx(-1.5));
  CHECK(x(1) == doctest::Approx(-0.5));
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  GridSpec g;
  g.dim = 2;
  g.n = {64, 32};
  g.length = {4.0, 4.0};
  const GridSpinor psi = random_spinor(g, 3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  kernels::MatrixField m(g.nodes());
  std::vector<Complex> phase(g.nodes());
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m[i](r, c) = Complex(n(rng), n(rng));
    phase[i] = std::exp(Complex(0, n(rng)));
  }
  std::vector<Complex> a = psi.data, b = psi.data;
  kernels::serial::apply_node_matrices(m, a.data());
  kernels::parallel::apply_node_matrices(m, b.data());
  CHECK(a == b);
  kernels::serial::scale_nodes(phase, a.data());
  kernels::parallel::scale_nodes(phase, b.data());
  CHECK(a == b);
  std::vector<double> ra(g.nodes()), rb(g.nodes());
  kernels::serial::node_density(a.data(), g.nodes(), ra.data());
  kernels::parallel::node_density(b.data(), g.nodes(), rb.data());
  CHECK(ra == rb);
  CHECK(kernels::serial::sum(ra.data(), ra.size()) == kernels::parallel::sum(rb.data(), rb.size()));
  CHECK(kernels::serial::sum_abs2(a.data(), a.size()) == kernels::parallel::sum_abs2(b.data(), b.size()));
  // direct oracle for one node
  const Eigen::Map<const Spinor4> in(psi.node(5));
  const Spinor4 expect = phase[5] * (m[5] * in);
  for (int c = 0; c < 4; ++c) CHECK(std::abs(a[20 + c] - expect(c)) < 1e-12);
}

TEST_CASE("spinor FFTs: round trip and plane waves") {
  GridSpec g;
  g.dim = 2;
  g.n = {16, 8};
  g.length = {2.0, 3.0};
  const GridSpinor psi = random_spinor(g, 9);
  const SpinorFft fft(g);
  std::vector<Complex> d = psi.data;
  fft.forward(d.data());
  fft.backward(d.data());
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(d[i] / double(g.nodes()) - psi.data[i]));
  CHECK(err < 1e-13);

  // plane wave with wave numbers (k_x, k_y) = (3, -2) lands in the matching mode
  GridSpinor wave(g);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const Vec3 x = g.position(i);
    const Complex v = std::exp(Complex(0, g.wavenumber(0, 3) * x(0) + g.wavenumber(1, 6) * x(1)));
    wave.node(i)[2] = v;
  }
  fft.forward(wave.data.data());
  const std::size_t mode = 6 * 16 + 3;
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    const double mag = std::abs(wave.node(k)[2]);
    if (k == mode) {
      CHECK(mag == doctest::Approx(double(g.nodes())));
      CHECK(g.momentum(k)(1) == doctest::Approx(g.eps * g.wavenumber(1, 6)));
    } else {
      CHECK(mag < 1e-9);
    }
  }
  // axis transforms compose to the full transform
  std::vector<Complex> e = psi.data, f = psi.data;
  fft.forward(e.data());
  fft.forward_axis(0, f.data());
  fft.forward_axis(1, f.data());
  err = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) err = std::max(err, std::abs(e[i] - f[i]));
  CHECK(err < 1e-11);
}

TEST_CASE("Weyl quantization of position-only and momentum-only symbols") {
  const GridSpec g = line_grid(128, 8.0, 0.1);
  const GridSpinor psi = gaussian(g, 0.3, 0.4, 0.5, unit_spinor());
  const ComplexMatrix4 a = dirac_gammas().gamma[0] * Complex(0, 1) + dirac_gammas().gamma0;

  // V(x) A acts as multiplication by V at the nodes.
  SymbolTraits qt;
  qt.q_axes = {true, false, false};
  const GridSymbol pot = make_grid_symbol([a](const PhasePoint& pt) { return ComplexMatrix4(std::cos(pt.q(0)) * a); }, qt);
  const GridSpinor out = weyl_apply(pot, psi, false);
  double err = 0.0;
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const Spinor4 expect = std::cos(g.position(i)(0)) * a * Eigen::Map<const Spinor4>(psi.node(i));
    err = std::max(err, (Eigen::Map<const Spinor4>(out.node(i)) - expect).norm());
  }
  CHECK(err < 1e-12);

  // A p-only symbol acts as a Fourier multiplier; the line kernel gives the same result.
  const DiracSymbol free(FieldConfig::none(), ParticleParams{});
  auto self = std::make_shared<const DiracSymbol>(free);
  auto f = [self](const PhasePoint& pt) { return self->projection(pt, Band::electron); };
  SymbolTraits pt_only;
  pt_only.q_axes = {false, false, false};
  const GridSpinor mult = weyl_apply(make_grid_symbol(f, pt_only), psi, false);
  const GridSpinor line = weyl_apply(make_grid_symbol(f, qt), psi, false);
  CHECK(max_diff(mult, line) < 1e-10);

  // Fourier oracle: multiply each mode by P+(eps k)
  GridSpinor oracle = psi;
  const SpinorFft fft(g);
  fft.forward(oracle.data.data());
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    Eigen::Map<Spinor4> v(oracle.node(k));
    v = (free.projection({Vec3::Zero(), g.momentum(k)}, Band::electron) * v / double(g.nodes())).eval();
  }
  fft.backward(oracle.data.data());
  CHECK(max_diff(mult, oracle) < 1e-12);

  // parallel path is bitwise identical to serial
  const GridSpinor par = weyl_apply(make_grid_symbol(f, qt), psi, true);
  CHECK(par.data == line.data);
}

TEST_CASE("Weyl quantization of a mixed symbol matches the symmetrized product") {
  // H = x p: Op(H) = (x (-i eps d) + (-i eps d) x) / 2, checked with spectral derivatives.
  const GridSpec g = line_grid(256, 16.0, 0.2);
  const GridSpinor psi = gaussian(g, -0.5, 0.3, 0.8, unit_spinor());
  SymbolTraits t;
  t.q_axes = {true, false, false};
  const GridSymbol xp =
      make_grid_symbol([](const PhasePoint& pt) { return ComplexMatrix4(pt.q(0) * pt.p(0) * ComplexMatrix4::Identity()); }, t);
  const GridSpinor out = weyl_apply(xp, psi, false);

  const SpinorFft fft(g);
  auto p_apply = [&](const GridSpinor& in) {
    GridSpinor r = in;
    fft.forward(r.data.data());
    for (std::size_t k = 0; k < g.nodes(); ++k)
      for (int c = 0; c < 4; ++c) r.node(k)[c] *= g.momentum(k)(0) / double(g.nodes());
    fft.backward(r.data.data());
    return r;
  };
  auto x_apply = [&](const GridSpinor& in) {
    GridSpinor r = in;
    for (std::size_t i = 0; i < g.nodes(); ++i)
      for (int c = 0; c < 4; ++c) r.node(i)[c] *= g.position(i)(0);
    return r;
  };
  const GridSpinor a = x_apply(p_apply(psi));
  const GridSpinor b = p_apply(x_apply(psi));
  double err = 0.0;
  for (std::size_t i = 0; i < psi.data.size(); ++i) err = std::max(err, std::abs(out.data[i] - 0.5 * (a.data[i] + b.data[i])));
  CHECK(err < 1e-8);
}

TEST_CASE("Weyl expectations") {
  const GridSpec g = line_grid(128, 10.0, 0.1);
  const Spinor4 phi = unit_spinor();
  const GridSpinor psi = gaussian(g, 0.2, 0.7, 0.6, phi);
  SymbolTraits t;
  t.q_axes = {true, false, false};
  GridSymbol moments;
  moments.count = 3;
  moments.traits = t;
  moments.eval = [](const PhasePoint& pt, ComplexMatrix4* out) {
    out[0] = ComplexMatrix4::Identity();
    out[1] = pt.q(0) * ComplexMatrix4::Identity();
    out[2] = pt.p(0) * ComplexMatrix4::Identity();
  };
  const std::vector<double> e = weyl_expectations(moments, psi, false);
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(e[2] == doctest::Approx(0.7).epsilon(1e-9));
  // matrix symbol: <psi, Op(M) psi> = phi^dagger M phi for a constant M
  const ComplexMatrix4 m = dirac_gammas().gamma5 + dirac_gammas().gamma0;
  const double expect = (phi.adjoint() * m * phi)(0, 0).real();
  const GridSymbol cm = make_grid_symbol([m](const PhasePoint&) { return m; }, t);
  CHECK(weyl_expectations(cm, psi, false)[0] == doctest::Approx(expect).epsilon(1e-12));
  // agreement with <psi, weyl_apply psi>
  const DiracSymbol sym(FieldConfig::harmonic_phi(0.5), ParticleParams{});
  auto self = std::make_shared<const DiracSymbol>(sym);
  const GridSymbol proj = make_grid_symbol(
      [self](const PhasePoint& pt) { return ComplexMatrix4(self->hamiltonian(pt)); }, t);
  const GridSpinor hpsi = weyl_apply(proj, psi, false);
  Complex inner(0, 0);
  for (std::size_t i = 0; i < psi.data.size(); ++i) inner += std::conj(psi.data[i]) * hpsi.data[i];
  inner *= g.cell_volume();
  CHECK(weyl_expectations(proj, psi, false)[0] == doctest::Approx(inner.real()).epsilon(1e-10));
  CHECK(weyl_expectations(proj, psi, true) == weyl_expectations(proj, psi, false));
}

TEST_CASE("2D Weyl quantization with one independent axis") {
  GridSpec g;
  g.dim = 2;
  g.n = {64, 64};
  g.length = {8.0, 8.0};
  g.eps = 0.2;
  GridSpinor psi(g);
  const Spinor4 phi = unit_spinor();
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const Vec3 x = g.position(i);
    const Complex amp = std::exp(-(x(0) * x(0) + (x(1) - 0.4) * (x(1) - 0.4)) / 2.0) * std::exp(Complex(0, 0.5 * x(0) / g.eps));
    for (int c = 0; c < 4; ++c) psi.node(i)[c] = amp * phi(c);
  }
  psi.normalize();
  // Landau gauge magnetic Dirac symbol depends on y only.
  const DiracSymbol sym(FieldConfig::uniform_b({0, 0, 1}, Vec3::Zero(), Gauge::landau), ParticleParams{});
  auto self = std::make_shared<const DiracSymbol>(sym);
  const GridSymbol h = make_grid_symbol([self](const PhasePoint& pt) { return ComplexMatrix4(self->hamiltonian(pt)); }, sym.traits());
  const GridSpinor out = weyl_apply(h, psi, false);
  // Oracle: H is linear in (p, A(y)) so Op(H) = c alpha . (-i eps grad - e A / c) + m c^2 beta.
  const SpinorFft fft(g);
  GridSpinor grad_x = psi, grad_y = psi;
  fft.forward(grad_x.data.data());
  fft.forward(grad_y.data.data());
  for (std::size_t k = 0; k < g.nodes(); ++k) {
    const Vec3 p = g.momentum(k);
    for (int c = 0; c < 4; ++c) {
      grad_x.node(k)[c] *= p(0) / double(g.nodes());
      grad_y.node(k)[c] *= p(1) / double(g.nodes());
    }
  }
  fft.backward(grad_x.data.data());
  fft.backward(grad_y.data.data());
  const auto& alpha = sym.alpha();
  double err = 0.0;
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const FieldSample f = eval_fields(sym.fields(), g.position(i));
    const Eigen::Map<const Spinor4> v(psi.node(i));
    const Spinor4 expect = alpha[0] * Eigen::Map<const Spinor4>(grad_x.node(i)) +
                           alpha[1] * Eigen::Map<const Spinor4>(grad_y.node(i)) -
                           (-1.0) * contract(f.a, alpha) * v + dirac_gammas().gamma0 * v;
    err = std::max(err, (Eigen::Map<const Spinor4>(out.node(i)) - expect).norm());
  }
  CHECK(err < 1e-8);

  // symbol depending on both axes is rejected
  SymbolTraits both;
  both.q_axes = {true, true, false};
  CHECK_THROWS_AS(weyl_apply(make_grid_symbol([](const PhasePoint&) { return ComplexMatrix4::Identity().eval(); }, both), psi),
                  ArgumentError);
}

TEST_CASE("Wigner function of a Gaussian packet") {
  // the lag reaches L/4 = 6, beyond 8 sigma
  const GridSpec g = line_grid(256, 24.0, 0.1);
  const double q0 = 0.5, p0 = -0.8, sigma = 0.7;
  const Spinor4 phi = unit_spinor();
  const GridSpinor psi = gaussian(g, q0, p0, sigma, phi);
  const WignerSlice w = wigner_slice_1d(psi);
  const double dp = w.p[1] - w.p[0];
  const ComplexMatrix4 proj = phi * phi.adjoint();
  double herm = 0.0, oracle = 0.0, xmarg = 0.0;
  std::vector<double> pmarg(w.p.size(), 0.0);
  for (std::size_t ix = 0; ix < w.x.size(); ++ix) {
    ComplexMatrix4 sum = ComplexMatrix4::Zero();
    for (std::size_t ip = 0; ip < w.p.size(); ++ip) {
      const ComplexMatrix4& m = w.at(ix, ip);
      herm = std::max(herm, (m - m.adjoint()).norm());
      const double x = w.x[ix], p = w.p[ip];
      const double expect = std::exp(-(x - q0) * (x - q0) / (2 * sigma * sigma) -
                                     2 * sigma * sigma * (p - p0) * (p - p0) / (g.eps * g.eps)) / (kPi * g.eps);
      oracle = std::max(oracle, (m - expect * proj).norm());
      sum += m * dp;
      pmarg[ip] += m.trace().real() * g.spacing(0);
    }
    const Eigen::Map<const Spinor4> v(psi.node(ix));
    xmarg = std::max(xmarg, (sum - v * v.adjoint()).norm());
  }
  CHECK(herm < 1e-12);
  CHECK(oracle < 1e-8);
  CHECK(xmarg < 1e-8);
  // p-marginal equals the momentum density |psi_hat(p)|^2 normalized to 1 over dp
  GridSpinor spec = psi;
  const SpinorFft fft(g);
  fft.forward(spec.data.data());
  double perr = 0.0;
  for (std::size_t ip = 0; ip < w.p.size(); ++ip) {
    const int k = static_cast<int>(ip) - g.n[0] / 2;
    const std::size_t mode = static_cast<std::size_t>((k + g.n[0]) % g.n[0]);
    double dens = 0.0;
    for (int c = 0; c < 4; ++c) dens += std::norm(spec.node(mode)[c]);
    dens *= g.cell_volume() * g.cell_volume() / (2 * kPi * g.eps);
    perr = std::max(perr, std::abs(pmarg[ip] - dens));
  }
  CHECK(perr < 1e-8);
  // stride keeps every other row
  CHECK(wigner_slice_1d(psi, 2).x.size() == 128);
}
