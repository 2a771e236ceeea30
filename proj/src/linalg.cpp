#include "scdirac/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>

namespace scdirac {

namespace {

// c_k = (2q-k)! q! / ((2q)! k! (q-k)!) for q = 8
constexpr std::array<double, 9> kPade8 = {
    1.0,
    0.5,
    0.11666666666666667,
    0.016666666666666666,
    0.0016025641025641025,
    0.00010683760683760684,
    4.856254856254856e-06,
    1.3875013875013875e-07,
    1.9270852604185938e-09,
};

}  // namespace

CMatrix expm(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix a = m / std::ldexp(1.0, squarings);

  CMatrix num = id * kPade8[0];
  CMatrix den = id * kPade8[0];
  CMatrix power = id;
  for (std::size_t k = 1; k < kPade8.size(); ++k) {
    power = power * a;
    num += kPade8[k] * power;
    den += ((k % 2 == 0) ? 1.0 : -1.0) * kPade8[k] * power;
  }
  CMatrix result = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

ComplexMatrix4 expm(const ComplexMatrix4& m) { return expm(CMatrix(m)); }

CMatrix exp_hermitian(const CMatrix& h, double t) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  const auto& vecs = eig.eigenvectors();
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(-kI * eig.eigenvalues()(i) * t);
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

ComplexMatrix4 exp_hermitian(const ComplexMatrix4& h, double t) {
  return exp_hermitian(CMatrix(h), t);
}

}  // namespace scdirac
