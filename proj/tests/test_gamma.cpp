#include "doctest.h"

#include "scdirac/gamma.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace scdirac;

TEST_CASE("gamma matrices satisfy the Clifford relations") {
  const GammaSet g = make_gamma_set();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  CHECK(max_abs(g.gamma0 * g.gamma0 - id) == 0.0);
  for (const auto& gi : g.gamma) CHECK(max_abs(gi * gi + id) == 0.0);
  CHECK(max_abs(anticommutator(g.gamma[0], g.gamma[1])) == 0.0);
  CHECK(check_relations(g).max() < kTolAlg);
  CHECK(g.convention == "dirac");
}

TEST_CASE("gamma5 in the Dirac representation is offdiag(I, I)") {
  // i g0 g1 g2 g3 multiplied out by hand: the block structure of g0 g^i is
  // offdiag(sigma_i, sigma_i), and i s1 s2 s3 = -1 gives the identity blocks.
  ComplexMatrix4 expected = ComplexMatrix4::Zero();
  expected.topRightCorner<2, 2>().setIdentity();
  expected.bottomLeftCorner<2, 2>().setIdentity();
  CHECK(max_abs(make_gamma_set().gamma5 - expected) < kTolAlg);
}

TEST_CASE("matrix exponential") {
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  CHECK(max_abs(expm(ComplexMatrix4(ComplexMatrix4::Zero())) - id) == 0.0);

  SUBCASE("involution K with theta = pi gives -I") {
    // K = gamma0 is a Hermitian involution; exp(-i pi K) = cos(pi) I - i sin(pi) K.
    const ComplexMatrix4 k = dirac_gammas().gamma0;
    const double theta = std::numbers::pi;
    const ComplexMatrix4 expected = std::cos(theta) * id - kI * std::sin(theta) * k;
    CHECK(max_abs(expm(ComplexMatrix4(-kI * theta * k)) - expected) < 1e-13);
    CHECK(max_abs(exp_hermitian(k, theta) + id) < 1e-13);
  }

  SUBCASE("Pade route agrees with the eigendecomposition route") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      CMatrix h(5, 5);
      for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) h(r, c) = Complex(n(rng), n(rng));
      h = (0.5 * (h + h.adjoint())).eval();
      const double t = 3.0 * n(rng);
      CHECK(max_abs(expm(CMatrix(-kI * t * h)) - exp_hermitian(h, t)) < 1e-10);
    }
  }
}

TEST_CASE("exp(-iMt) is unitary for Hermitian M and |t| <= 10") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix4 m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = Complex(n(rng), n(rng));
    m = 0.5 * (m + m.adjoint()).eval();
    const ComplexMatrix4 u4 = exp_hermitian(m, u(rng));
    CHECK(max_abs(u4 * u4.adjoint() - ComplexMatrix4::Identity()) < 1e-12);
  }
}

TEST_CASE("trace is cyclic and commutator with identity vanishes") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix4 a, b;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        a(r, c) = Complex(n(rng), n(rng));
        b(r, c) = Complex(n(rng), n(rng));
      }
    const Complex ab = (a * b).trace();
    const Complex ba = (b * a).trace();
    CHECK(std::abs(ab - ba) <= 1e-12 * std::max(1.0, std::abs(ab)));
    CHECK(max_abs(commutator(ComplexMatrix4(ComplexMatrix4::Identity()), a)) == 0.0);
  }
}
