#pragma once

#include <Eigen/Dense>

#include <complex>

namespace scdirac {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using ComplexMatrix4 = Eigen::Matrix<Complex, 4, 4>;
using Spinor4 = Eigen::Matrix<Complex, 4, 1>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Default tolerance for exact algebraic identities in double precision.
inline constexpr double kTolAlg = 1e-12;

template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a * b - b * a).eval();
}

template <typename A, typename B>
auto anticommutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a * b + b * a).eval();
}

/// Largest absolute entry; the norm used for all identity residuals.
template <typename A>
double max_abs(const Eigen::MatrixBase<A>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

template <typename A>
bool is_hermitian(const Eigen::MatrixBase<A>& m, double tol = kTolAlg) {
  return max_abs(m - m.adjoint()) < tol;
}

/// exp(M) for a general square matrix by scaling and squaring with a
/// diagonal Padé approximant of degree 8.
CMatrix expm(const CMatrix& m);
ComplexMatrix4 expm(const ComplexMatrix4& m);

/// exp(-i H t) for Hermitian H through its eigendecomposition.
CMatrix exp_hermitian(const CMatrix& h, double t);
ComplexMatrix4 exp_hermitian(const ComplexMatrix4& h, double t);

}  // namespace scdirac
