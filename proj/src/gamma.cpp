#include "scdirac/gamma.hpp"

#include <algorithm>

namespace scdirac {

std::array<Eigen::Matrix2cd, 3> pauli_matrices() {
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

GammaSet make_gamma_set() {
  GammaSet g;
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
  g.gamma0.setZero();
  g.gamma0.topLeftCorner<2, 2>() = id2;
  g.gamma0.bottomRightCorner<2, 2>() = -id2;

  const auto sigma = pauli_matrices();
  for (int i = 0; i < 3; ++i) {
    g.gamma[i].setZero();
    g.gamma[i].topRightCorner<2, 2>() = sigma[i];
    g.gamma[i].bottomLeftCorner<2, 2>() = -sigma[i];
  }
  g.gamma5 = kI * g.gamma0 * g.gamma[0] * g.gamma[1] * g.gamma[2];
  g.convention = "dirac";
  return g;
}

const GammaSet& dirac_gammas() {
  static const GammaSet instance = make_gamma_set();
  return instance;
}

double GammaRelations::max() const {
  return std::max({clifford, gamma5_square, gamma5_anticommute, hermiticity});
}

GammaRelations check_relations(const GammaSet& g) {
  GammaRelations r;
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      double metric = 0.0;
      if (mu == nu) metric = (mu == 0) ? 1.0 : -1.0;
      const ComplexMatrix4 lhs = anticommutator(g.mu(mu), g.mu(nu));
      r.clifford = std::max(r.clifford, max_abs(lhs - 2.0 * metric * id));
    }
    r.gamma5_anticommute = std::max(r.gamma5_anticommute, max_abs(anticommutator(g.gamma5, g.mu(mu))));
  }
  r.gamma5_square = max_abs(g.gamma5 * g.gamma5 - id);
  r.hermiticity = std::max({max_abs(g.gamma0 - g.gamma0.adjoint()), max_abs(g.gamma5 - g.gamma5.adjoint())});
  for (const auto& gi : g.gamma) r.hermiticity = std::max(r.hermiticity, max_abs(gi + gi.adjoint()));
  return r;
}

}  // namespace scdirac
