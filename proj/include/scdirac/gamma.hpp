#pragma once

#include "scdirac/linalg.hpp"

#include <array>
#include <string>

namespace scdirac {

/// Dirac gamma matrices with metric (+,-,-,-).
struct GammaSet {
  ComplexMatrix4 gamma0;
  std::array<ComplexMatrix4, 3> gamma;  // gamma^1, gamma^2, gamma^3
  ComplexMatrix4 gamma5;
  std::string convention;

  const ComplexMatrix4& mu(int index) const { return index == 0 ? gamma0 : gamma[index - 1]; }
};

/// Standard (Dirac) representation: gamma0 = diag(I, -I),
/// gamma^i = offdiag(sigma_i, -sigma_i), gamma5 = i gamma0 gamma1 gamma2 gamma3.
GammaSet make_gamma_set();

/// Process-wide instance of make_gamma_set().
const GammaSet& dirac_gammas();

/// Pauli matrices as 2x2 complex matrices.
std::array<Eigen::Matrix2cd, 3> pauli_matrices();

/// Maximum residuals of the defining relations of a GammaSet.
struct GammaRelations {
  double clifford = 0.0;         // {g^mu, g^nu} - 2 g^{mu nu}
  double gamma5_square = 0.0;    // g5^2 - I
  double gamma5_anticommute = 0.0;
  double hermiticity = 0.0;      // g0, g5 Hermitian; g^i anti-Hermitian

  double max() const;
};

GammaRelations check_relations(const GammaSet& g);

}  // namespace scdirac
