#include "doctest.h"

#include "scdirac/dirac_symbol.hpp"
#include "scdirac/error.hpp"
#include "scdirac/multiband.hpp"
#include "scdirac/semiclassical.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace scdirac;

namespace {

const Eigen::Matrix2cd& pauli(int i) {
  static const std::array<Eigen::Matrix2cd, 3> s = [] {
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s[static_cast<std::size_t>(i)];
}

// Two-level symbol h(p) n(q).sigma + shift with h = sqrt(1 + p^2) and
// n = (sin t cos c, sin t sin c, cos t), t = 0.8 + 0.3 sin(q_x), c = 2 q_y.
// The bands depend on p only and the projections on q only, so {P, P} = 0 and
// the upper-band spinor is parallel transported.
struct BerryToy {
  double shift = 0.3;
  static double theta(double x) { return 0.8 + 0.3 * std::sin(x); }
  static double chi(double y) { return 2.0 * y; }

  static Eigen::Matrix2cd n_sigma(double t, double c) {
    return std::sin(t) * std::cos(c) * pauli(0) + std::sin(t) * std::sin(c) * pauli(1) + std::cos(t) * pauli(2);
  }

  MatrixSymbol symbol() const {
    const double s = shift;
    auto value = [s](const PhasePoint& pt) -> CMatrix {
      const double h = std::sqrt(1.0 + pt.p.squaredNorm());
      return h * n_sigma(theta(pt.q(0)), chi(pt.q(1))) + s * Eigen::Matrix2cd::Identity();
    };
    auto jet = [value](const PhasePoint& pt) {
      const double h = std::sqrt(1.0 + pt.p.squaredNorm());
      const double t = theta(pt.q(0)), c = chi(pt.q(1));
      const Eigen::Matrix2cd d_t = std::cos(t) * std::cos(c) * pauli(0) + std::cos(t) * std::sin(c) * pauli(1) -
                                   std::sin(t) * pauli(2);
      const Eigen::Matrix2cd d_c = -std::sin(t) * std::sin(c) * pauli(0) + std::sin(t) * std::cos(c) * pauli(1);
      SymbolJet j = SymbolJet::zero(2);
      j.value = value(pt);
      j.dq[0] = h * 0.3 * std::cos(pt.q(0)) * d_t;
      j.dq[1] = h * 2.0 * d_c;
      for (int i = 0; i < 3; ++i) j.dp[i] = (pt.p(i) / h) * n_sigma(t, c);
      return j;
    };
    return MatrixSymbol(2, value, jet);
  }

  // Upper eigenvector of n.sigma in a fixed gauge.
  static CVector upper(const Vec3& q) {
    const double t = theta(q(0)), c = chi(q(1));
    CVector u(2);
    u << std::cos(t / 2), std::exp(Complex(0, c)) * std::sin(t / 2);
    return u;
  }
};

MultibandSymbol dirac_multiband(const DiracSymbol& sym, BracketMode mode = BracketMode::analytic) {
  return MultibandSymbol(sym.hamiltonian_symbol(), mode);
}

}  // namespace

TEST_CASE("spectral decomposition") {
  SUBCASE("Dirac symbol has two doubly degenerate bands") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const DiracSymbol sym(testing::random_polynomial_field(rng), ParticleParams{});
      const PhasePoint pt = testing::random_point(rng);
      const BandDecomposition d = spectral_decompose(sym.hamiltonian(pt));
      REQUIRE(d.bands.size() == 2);
      CHECK(d.bands[0].degeneracy == 2);
      CHECK(d.bands[1].degeneracy == 2);
      const BandEnergies e = sym.band_energies(pt);
      CHECK(d.bands[0].h == doctest::Approx(e.minus).epsilon(1e-12));
      CHECK(d.bands[1].h == doctest::Approx(e.plus).epsilon(1e-12));
      CHECK(max_abs(d.bands[1].projection - CMatrix(sym.projections(pt).plus)) < 1e-12);
      CHECK(d.gap == doctest::Approx(e.plus - e.minus).epsilon(1e-12));
    }
  }
  SUBCASE("diagonal matrix gives coordinate dyads") {
    CMatrix h = CMatrix::Zero(3, 3);
    h.diagonal() << 1, 2, 3;
    const BandDecomposition d = spectral_decompose(h);
    REQUIRE(d.bands.size() == 3);
    for (int j = 0; j < 3; ++j) {
      CMatrix dyad = CMatrix::Zero(3, 3);
      dyad(j, j) = 1;
      CHECK(d.bands[static_cast<std::size_t>(j)].h == doctest::Approx(j + 1.0));
      CHECK(max_abs(CMatrix(d.bands[static_cast<std::size_t>(j)].projection - dyad)) < 1e-15);
    }
  }
  SUBCASE("random 5 x 5 is reconstructed") {
    for (int seed = 0; seed < 10; ++seed) {
      CMatrix a = CMatrix::Random(5, 5);
      a = (a + a.adjoint()).eval();
      const BandDecomposition d = spectral_decompose(a);
      CHECK(d.bands.size() == 5);
      CHECK(max_abs(CMatrix(d.reconstruct() - a)) < 1e-12);
      CMatrix total = CMatrix::Zero(5, 5);
      for (const auto& b : d.bands) {
        total += b.projection;
        CHECK(max_abs(CMatrix(b.projection * b.projection - b.projection)) < 1e-13);
      }
      CHECK(max_abs(CMatrix(total - CMatrix::Identity(5, 5))) < 1e-13);
    }
  }
  SUBCASE("near crossings are rejected") {
    CMatrix h = CMatrix::Zero(3, 3);
    h.diagonal() << 1.0, 1.0 + 1e-8, 3.0;
    CHECK_THROWS_AS(spectral_decompose(h), BandCrossingError);
    h.diagonal() << 1.0, 1.0 + 1e-13, 3.0;
    CHECK(spectral_decompose(h).bands.size() == 2);
  }
  SUBCASE("non-Hermitian input is rejected") {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral_decompose(h), ArgumentError);
  }
}

TEST_CASE("perturbative band jets agree with finite differences") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixSymbol s = random_hermitian_polynomial(3, 500 + static_cast<std::uint64_t>(trial), 0.5).symbol();
    const MultibandSymbol an(s, BracketMode::analytic);
    const MultibandSymbol fd(s, BracketMode::finite_diff);
    const PhasePoint pt = testing::random_point(rng);
    if (an.decompose(pt).gap < 0.05) continue;
    const auto ja = an.band_jets(pt);
    const auto jf = fd.band_jets(pt);
    for (std::size_t j = 0; j < ja.size(); ++j) {
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(ja[j].h.dq(i) - jf[j].h.dq(i)) < 1e-7);
        CHECK(std::abs(ja[j].h.dp(i) - jf[j].h.dp(i)) < 1e-7);
        CHECK(max_abs(CMatrix(ja[j].p.dq[i] - jf[j].p.dq[i])) < 1e-6);
        CHECK(max_abs(CMatrix(ja[j].p.dp[i] - jf[j].p.dp[i])) < 1e-6);
      }
    }
  }
}

TEST_CASE("band spin Hamiltonian") {
  SUBCASE("a single scalar band has none") {
    const MultibandSymbol one(random_hermitian_polynomial(1, 4).symbol());
    CHECK(max_abs(one.spin_hamiltonian(0, {{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}})) == 0.0);
  }
  SUBCASE("a constant symbol has none") {
    CMatrix c = CMatrix::Zero(3, 3);
    c.diagonal() << -1, 0.5, 2;
    const MultibandSymbol sym(constant_symbol(c));
    for (int j = 0; j < 3; ++j) CHECK(max_abs(sym.spin_hamiltonian(j, {{1, 2, 3}, {4, 5, 6}})) == 0.0);
  }
  SUBCASE("Dirac electron band reproduces the closed forms") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const DiracSymbol dirac(testing::random_polynomial_field(rng), ParticleParams{});
      const PhasePoint pt = testing::random_point(rng);
      const CMatrix closed = dirac.spin_hamiltonians(pt).total();
      CHECK(max_abs(CMatrix(dirac_multiband(dirac).spin_hamiltonian(1, pt) - closed)) < 1e-10);
      CHECK(max_abs(CMatrix(dirac_multiband(dirac, BracketMode::finite_diff).spin_hamiltonian(1, pt) - closed)) <
            1e-5);
      CHECK(max_abs(CMatrix(dirac_multiband(dirac).spin_hamiltonian(0, pt) -
                            CMatrix(dirac.spin_hamiltonian(pt, Band::positron)))) < 1e-10);
    }
  }
  SUBCASE("band index is checked") {
    const MultibandSymbol one(random_hermitian_polynomial(2, 4).symbol());
    CHECK_THROWS_AS(one.spin_hamiltonian(5, PhasePoint{}), ArgumentError);
  }
}

TEST_CASE("band packet evolution") {
  SUBCASE("Dirac client reproduces the specialized integrator") {
    for (const FieldConfig& f : {FieldConfig::uniform_b({0, 0, 1}), FieldConfig::crossed_eb({0.3, 0, 0}, {0, 0.2, 1}),
                                 FieldConfig::harmonic_phi(0.5, {0, 0, 0})}) {
      const DiracSymbol dirac(f, ParticleParams{});
      const DeltaPacket pk = make_packet(dirac, {{0.1, 0.2, 0}, {0.9, -0.3, 0.2}}, {1, 0.5, 0.2});
      const TrajectoryRecord ref = evolve_packet(dirac, pk, 6.0, 0.01);
      const BandRecord rec = evolve_band_packet(dirac_multiband(dirac), {1, pk.pt, pk.spinor}, 6.0, 0.01);
      REQUIRE(rec.samples.size() == ref.samples.size());
      double worst = 0;
      for (std::size_t i = 0; i < rec.samples.size(); ++i) {
        worst = std::max(worst, (rec.samples[i].q - ref.samples[i].q).norm());
        worst = std::max(worst, (rec.samples[i].p - ref.samples[i].p).norm());
        worst = std::max(worst, (rec.samples[i].spinor - ref.samples[i].spinor).norm());
      }
      CHECK(worst < 1e-9);
    }
  }
  SUBCASE("constant symbol keeps the packet static") {
    CMatrix c = CMatrix::Zero(2, 2);
    c.diagonal() << -1, 1;
    CVector phi = CVector::Zero(2);
    phi(1) = 1;
    const BandRecord rec = evolve_band_packet(MultibandSymbol(constant_symbol(c)), {1, {{1, 2, 3}, {4, 5, 6}}, phi}, 2.0, 0.1);
    CHECK(rec.samples.back().q == Vec3(1, 2, 3));
    CHECK(rec.samples.back().p == Vec3(4, 5, 6));
    CHECK(rec.samples.back().spinor == phi);
  }
  SUBCASE("offsetting another band moves the spinor but not the orbit") {
    const DiracSymbol dirac(FieldConfig::crossed_eb({0.2, 0, 0}, {0, 0, 1}), ParticleParams{});
    const double delta = 0.7;
    const MatrixSymbol base = dirac.hamiltonian_symbol();
    const MatrixSymbol lower = dirac.projection_symbol(Band::positron);
    const MultibandSymbol shifted(sum(base, scaled(delta, lower)));
    const MultibandSymbol plain(base);
    const PhasePoint pt{{0, 0, 0}, {0.7, 0.2, 0.1}};
    const CMatrix dh = shifted.spin_hamiltonian(1, pt) - plain.spin_hamiltonian(1, pt);
    const CMatrix p = dirac.projection(pt, Band::electron);
    const CMatrix expected = (0.5 * kI * delta) * p * CMatrix(dirac.curly_pp(pt)) * p;
    CHECK(max_abs(dh) > 1e-3);
    CHECK(max_abs(CMatrix(dh - expected)) < 1e-12);

    const DeltaPacket pk = make_packet(dirac, pt, {1, 0, 0});
    const BandRecord a = evolve_band_packet(plain, {1, pt, pk.spinor}, 5.0, 0.01);
    const BandRecord b = evolve_band_packet(shifted, {1, pt, pk.spinor}, 5.0, 0.01);
    double orbit = 0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      orbit = std::max(orbit, (a.samples[i].q - b.samples[i].q).norm() + (a.samples[i].p - b.samples[i].p).norm());
    }
    CHECK(orbit < 1e-12);
    CHECK((a.samples.back().spinor - b.samples.back().spinor).norm() > 1e-3);
    CHECK(b.samples.back().band_residual < 1e-8);
  }
  SUBCASE("Berry phase of a two-level symbol") {
    const BerryToy toy;
    const MultibandSymbol sym(toy.symbol());
    const PhasePoint pt{{0.2, -0.1, 0}, {0.6, 0.8, 0}};
    const double t_final = 6.0, dt = 1e-3;
    const BandRecord rec = evolve_band_packet(sym, {1, pt, BerryToy::upper(pt.q)}, t_final, dt);
    for (const auto& s : rec.samples) CHECK((s.p - pt.p).norm() < 1e-14);

    // Line integral of A = i <u|grad u> along the recorded orbit, by Simpson's
    // rule in time with the connection from central differences of u.
    auto connection = [](const Vec3& q, const Vec3& qdot) {
      const double h = 1e-5;
      Complex acc = 0;
      for (int i = 0; i < 2; ++i) {
        const CVector du = (BerryToy::upper(q + h * Vec3::Unit(i)) - BerryToy::upper(q - h * Vec3::Unit(i))) / (2 * h);
        acc += qdot(i) * BerryToy::upper(q).dot(du);
      }
      return (kI * acc).real();
    };
    const Vec3 v = pt.p / std::sqrt(1.0 + pt.p.squaredNorm());
    const std::size_t n = rec.samples.size() - 1;
    REQUIRE(n % 2 == 0);
    double beta = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      beta += w * connection(rec.samples[i].q, v);
    }
    beta *= rec.dt / 3.0;
    const BandSample& last = rec.samples.back();
    const Complex overlap = BerryToy::upper(last.q).dot(last.spinor);
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-9);
    CHECK(std::abs(std::remainder(std::arg(overlap) - beta, 2 * std::acos(-1.0))) < 1e-6);
    CHECK(std::abs(beta) > 0.5);
  }
  SUBCASE("crossing along the orbit aborts") {
    // diag(q_x, -q_x) + p_x: the orbit drifts with q_x(t) = q_x(0) + t into the crossing at q_x = 0.
    MatrixPolynomial poly(2);
    CMatrix s3 = CMatrix::Zero(2, 2);
    s3(0, 0) = 1;
    s3(1, 1) = -1;
    poly.add(s3, {1, 0, 0, 0, 0, 0});
    poly.add(CMatrix::Identity(2, 2), {0, 0, 0, 1, 0, 0});
    CVector phi = CVector::Zero(2);
    phi(0) = 1;
    CHECK_THROWS_AS(evolve_band_packet(MultibandSymbol(poly.symbol()), {1, {{-1, 0, 0}, {0, 0, 0}}, phi}, 2.0, 0.01),
                    BandCrossingError);
  }
}

TEST_CASE("bracket identities") {
  SUBCASE("Dirac symbol at random points") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
      const DiracSymbol dirac(testing::random_polynomial_field(rng), ParticleParams{});
      const PhasePoint pt = testing::random_point(rng);
      const IdentityResiduals fd =
          verify_bracket_identities(dirac_multiband(dirac, BracketMode::finite_diff), pt, 1000 + trial);
      const IdentityResiduals an = verify_bracket_identities(dirac_multiband(dirac), pt, 1000 + trial);
      CHECK(fd.entries.size() == 8);
      CHECK(fd.max() < 1e-5);
      CHECK(an.max() < 1e-10);
    }
  }
  SUBCASE("scalar symbol") {
    const MultibandSymbol one(random_hermitian_polynomial(1, 77).symbol());
    const IdentityResiduals r = verify_bracket_identities(one, {{0.3, 0, 0.1}, {0, 0.5, 0}}, 5);
    CHECK(r.max() < 1e-14);
  }
  SUBCASE("random three-band and two-band symbols") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
      const MatrixSymbol s = random_hermitian_polynomial(3, 900 + static_cast<std::uint64_t>(trial), 0.5).symbol();
      const PhasePoint pt = testing::random_point(rng);
      const MultibandSymbol an(s);
      if (an.decompose(pt).gap < 0.05) continue;
      CHECK(verify_bracket_identities(an, pt, 3).max() < 1e-9);
      CHECK(verify_bracket_identities(MultibandSymbol(s, BracketMode::finite_diff), pt, 3).max() < 1e-5);
    }
    // 4 x 4 with two doubly degenerate bands: U diag(a, a, b, b) U^dagger.
    for (int trial = 0; trial < 5; ++trial) {
      const MatrixPolynomial gen = random_hermitian_polynomial(4, 950 + static_cast<std::uint64_t>(trial), 0.4);
      const MatrixSymbol two_band(4, [gen](const PhasePoint& pt) -> CMatrix {
        const CMatrix u = expm(CMatrix(kI * gen.value(pt)));
        CMatrix d = CMatrix::Zero(4, 4);
        const double a = 1.0 + 0.2 * pt.p.squaredNorm();
        d.diagonal() << a, a, -a + 0.3 * pt.q(0), -a + 0.3 * pt.q(0);
        return u * d * u.adjoint();
      });
      const PhasePoint pt = testing::random_point(rng, 0.5);
      const MultibandSymbol sym(two_band, BracketMode::finite_diff);
      REQUIRE(sym.decompose(pt).bands.size() == 2);
      CHECK(verify_bracket_identities(sym, pt, 11).max() < 1e-5);
    }
  }
}
