#pragma once

#include "scdirac/linalg.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace scdirac {

/// Canonical phase-space coordinates.
struct PhasePoint {
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();
};

/// A real scalar function value with its q and p gradients.
struct ScalarJet {
  double value = 0.0;
  Vec3 dq = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

/// An n x n matrix-valued function value with its partial derivatives.
struct SymbolJet {
  CMatrix value;
  std::array<CMatrix, 3> dq;
  std::array<CMatrix, 3> dp;

  Eigen::Index dim() const { return value.rows(); }
  static SymbolJet constant(const CMatrix& m);
  static SymbolJet zero(Eigen::Index n);
};

SymbolJet operator+(const SymbolJet& a, const SymbolJet& b);
SymbolJet operator-(const SymbolJet& a, const SymbolJet& b);
SymbolJet operator*(const SymbolJet& a, const SymbolJet& b);
SymbolJet operator*(Complex s, const SymbolJet& a);
SymbolJet operator*(const ScalarJet& f, const SymbolJet& a);
SymbolJet adjoint(const SymbolJet& a);

/// Matrix Poisson bracket {A, B} = grad_p A . grad_q B - grad_q A . grad_p B,
/// keeping the order of the (noncommuting) factors.
CMatrix poisson_bracket(const SymbolJet& a, const SymbolJet& b);
CMatrix poisson_bracket(const ScalarJet& f, const SymbolJet& b);
CMatrix poisson_bracket(const SymbolJet& a, const ScalarJet& g);
double poisson_bracket(const ScalarJet& f, const ScalarJet& g);

enum class BracketMode { analytic, finite_diff };

/// Which coordinates a symbol actually depends on; used by the Weyl
/// quantizer to choose a fast path.
struct SymbolTraits {
  std::array<bool, 3> q_axes{true, true, true};
  std::array<bool, 3> p_axes{true, true, true};

  bool depends_on_q() const { return q_axes[0] || q_axes[1] || q_axes[2]; }
  bool depends_on_p() const { return p_axes[0] || p_axes[1] || p_axes[2]; }
  SymbolTraits merged(const SymbolTraits& other) const;
};

/// An n x n Hermitian matrix-valued function on phase space, optionally
/// carrying analytic gradients.
class MatrixSymbol {
 public:
  using Evaluator = std::function<CMatrix(const PhasePoint&)>;
  using JetEvaluator = std::function<SymbolJet(const PhasePoint&)>;

  MatrixSymbol() = default;
  MatrixSymbol(int dim, Evaluator eval, JetEvaluator jet = {}, SymbolTraits traits = {});

  int dim() const { return dim_; }
  CMatrix operator()(const PhasePoint& pt) const { return eval_(pt); }
  bool has_gradients() const { return static_cast<bool>(jet_); }
  const SymbolTraits& traits() const { return traits_; }

  /// Analytic jet if mode == analytic (throws ArgumentError when absent),
  /// central finite differences otherwise.
  SymbolJet jet(const PhasePoint& pt, BracketMode mode) const;

 private:
  int dim_ = 0;
  Evaluator eval_;
  JetEvaluator jet_;
  SymbolTraits traits_;
};

/// Central differences with step 1e-5 * (1 + |coordinate|).
SymbolJet finite_difference_jet(const MatrixSymbol& s, const PhasePoint& pt);
double finite_difference_step(double coordinate);

CMatrix poisson_bracket(const MatrixSymbol& a, const MatrixSymbol& b, const PhasePoint& pt,
                        BracketMode mode);

/// Residual of A{B,C} - {A,B}C - {AB,C} + {A,BC} (max-abs entry).
double check_product_identity(const MatrixSymbol& a, const MatrixSymbol& b, const MatrixSymbol& c,
                              const PhasePoint& pt, BracketMode mode);

MatrixSymbol constant_symbol(const CMatrix& m);
MatrixSymbol product(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol sum(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol scaled(Complex s, const MatrixSymbol& a);
/// 1x1 symbols q_i and p_i.
MatrixSymbol coordinate_q(int axis);
MatrixSymbol coordinate_p(int axis);

/// Polynomial in the six coordinates (q, p) with matrix coefficients.
class MatrixPolynomial {
 public:
  struct Term {
    CMatrix coeff;
    std::array<int, 6> power{};  // exponents of q_x, q_y, q_z, p_x, p_y, p_z
  };

  explicit MatrixPolynomial(int dim) : dim_(dim) {}
  void add(CMatrix coeff, std::array<int, 6> power);

  CMatrix value(const PhasePoint& pt) const;
  SymbolJet jet(const PhasePoint& pt) const;
  MatrixSymbol symbol() const;
  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<Term> terms_;
};

/// Hermitian polynomial symbol of total degree <= 2 with coefficients drawn
/// from N(0, scale^2); deterministic in seed.
MatrixPolynomial random_hermitian_polynomial(int dim, std::uint64_t seed, double scale = 0.3);

}  // namespace scdirac
