#include "scdirac/calculus.hpp"

#include "scdirac/error.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <utility>

namespace scdirac {

SymbolJet SymbolJet::constant(const CMatrix& m) {
  SymbolJet j = zero(m.rows());
  j.value = m;
  return j;
}

SymbolJet SymbolJet::zero(Eigen::Index n) {
  SymbolJet j;
  j.value = CMatrix::Zero(n, n);
  for (int i = 0; i < 3; ++i) {
    j.dq[i] = CMatrix::Zero(n, n);
    j.dp[i] = CMatrix::Zero(n, n);
  }
  return j;
}

SymbolJet operator+(const SymbolJet& a, const SymbolJet& b) {
  SymbolJet r;
  r.value = a.value + b.value;
  for (int i = 0; i < 3; ++i) {
    r.dq[i] = a.dq[i] + b.dq[i];
    r.dp[i] = a.dp[i] + b.dp[i];
  }
  return r;
}

SymbolJet operator-(const SymbolJet& a, const SymbolJet& b) { return a + Complex(-1.0) * b; }

SymbolJet operator*(const SymbolJet& a, const SymbolJet& b) {
  SymbolJet r;
  r.value = a.value * b.value;
  for (int i = 0; i < 3; ++i) {
    r.dq[i] = a.dq[i] * b.value + a.value * b.dq[i];
    r.dp[i] = a.dp[i] * b.value + a.value * b.dp[i];
  }
  return r;
}

SymbolJet operator*(Complex s, const SymbolJet& a) {
  SymbolJet r;
  r.value = s * a.value;
  for (int i = 0; i < 3; ++i) {
    r.dq[i] = s * a.dq[i];
    r.dp[i] = s * a.dp[i];
  }
  return r;
}

SymbolJet operator*(const ScalarJet& f, const SymbolJet& a) {
  SymbolJet r;
  r.value = f.value * a.value;
  for (int i = 0; i < 3; ++i) {
    r.dq[i] = f.dq(i) * a.value + f.value * a.dq[i];
    r.dp[i] = f.dp(i) * a.value + f.value * a.dp[i];
  }
  return r;
}

SymbolJet adjoint(const SymbolJet& a) {
  SymbolJet r;
  r.value = a.value.adjoint();
  for (int i = 0; i < 3; ++i) {
    r.dq[i] = a.dq[i].adjoint();
    r.dp[i] = a.dp[i].adjoint();
  }
  return r;
}

CMatrix poisson_bracket(const SymbolJet& a, const SymbolJet& b) {
  if (a.dim() != b.dim()) throw ArgumentError("poisson_bracket: dimension mismatch");
  CMatrix r = CMatrix::Zero(a.dim(), a.dim());
  for (int i = 0; i < 3; ++i) r += a.dp[i] * b.dq[i] - a.dq[i] * b.dp[i];
  return r;
}

CMatrix poisson_bracket(const ScalarJet& f, const SymbolJet& b) {
  CMatrix r = CMatrix::Zero(b.dim(), b.dim());
  for (int i = 0; i < 3; ++i) r += f.dp(i) * b.dq[i] - f.dq(i) * b.dp[i];
  return r;
}

CMatrix poisson_bracket(const SymbolJet& a, const ScalarJet& g) {
  CMatrix r = CMatrix::Zero(a.dim(), a.dim());
  for (int i = 0; i < 3; ++i) r += a.dp[i] * g.dq(i) - a.dq[i] * g.dp(i);
  return r;
}

double poisson_bracket(const ScalarJet& f, const ScalarJet& g) {
  return f.dp.dot(g.dq) - f.dq.dot(g.dp);
}

SymbolTraits SymbolTraits::merged(const SymbolTraits& other) const {
  SymbolTraits r;
  for (int i = 0; i < 3; ++i) {
    r.q_axes[i] = q_axes[i] || other.q_axes[i];
    r.p_axes[i] = p_axes[i] || other.p_axes[i];
  }
  return r;
}

MatrixSymbol::MatrixSymbol(int dim, Evaluator eval, JetEvaluator jet, SymbolTraits traits)
    : dim_(dim), eval_(std::move(eval)), jet_(std::move(jet)), traits_(traits) {
  if (dim_ <= 0) throw ArgumentError("MatrixSymbol: dimension must be positive");
}

SymbolJet MatrixSymbol::jet(const PhasePoint& pt, BracketMode mode) const {
  if (mode == BracketMode::finite_diff) return finite_difference_jet(*this, pt);
  if (!jet_) throw ArgumentError("MatrixSymbol: analytic gradients not available");
  return jet_(pt);
}

double finite_difference_step(double coordinate) { return 1e-5 * (1.0 + std::abs(coordinate)); }

SymbolJet finite_difference_jet(const MatrixSymbol& s, const PhasePoint& pt) {
  SymbolJet j;
  j.value = s(pt);
  for (int i = 0; i < 3; ++i) {
    {
      const double h = finite_difference_step(pt.q(i));
      PhasePoint plus = pt, minus = pt;
      plus.q(i) += h;
      minus.q(i) -= h;
      j.dq[i] = (s(plus) - s(minus)) / (plus.q(i) - minus.q(i));
    }
    {
      const double h = finite_difference_step(pt.p(i));
      PhasePoint plus = pt, minus = pt;
      plus.p(i) += h;
      minus.p(i) -= h;
      j.dp[i] = (s(plus) - s(minus)) / (plus.p(i) - minus.p(i));
    }
  }
  return j;
}

CMatrix poisson_bracket(const MatrixSymbol& a, const MatrixSymbol& b, const PhasePoint& pt,
                        BracketMode mode) {
  if (a.dim() != b.dim()) throw ArgumentError("poisson_bracket: dimension mismatch");
  return poisson_bracket(a.jet(pt, mode), b.jet(pt, mode));
}

double check_product_identity(const MatrixSymbol& a, const MatrixSymbol& b, const MatrixSymbol& c,
                              const PhasePoint& pt, BracketMode mode) {
  if (a.dim() != b.dim() || b.dim() != c.dim()) {
    throw ArgumentError("check_product_identity: dimension mismatch");
  }
  const SymbolJet ja = a.jet(pt, mode);
  const SymbolJet jb = b.jet(pt, mode);
  const SymbolJet jc = c.jet(pt, mode);
  SymbolJet jab, jbc;
  if (mode == BracketMode::analytic) {
    jab = ja * jb;
    jbc = jb * jc;
  } else {
    jab = finite_difference_jet(product(a, b), pt);
    jbc = finite_difference_jet(product(b, c), pt);
  }
  const CMatrix residual = ja.value * poisson_bracket(jb, jc) - poisson_bracket(ja, jb) * jc.value -
                           poisson_bracket(jab, jc) + poisson_bracket(ja, jbc);
  return max_abs(residual);
}

MatrixSymbol constant_symbol(const CMatrix& m) {
  SymbolTraits traits;
  traits.q_axes = {false, false, false};
  traits.p_axes = {false, false, false};
  return MatrixSymbol(
      static_cast<int>(m.rows()), [m](const PhasePoint&) { return m; },
      [m](const PhasePoint&) { return SymbolJet::constant(m); }, traits);
}

MatrixSymbol product(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.dim() != b.dim()) throw ArgumentError("product: dimension mismatch");
  MatrixSymbol::JetEvaluator jet;
  if (a.has_gradients() && b.has_gradients()) {
    jet = [a, b](const PhasePoint& pt) {
      return a.jet(pt, BracketMode::analytic) * b.jet(pt, BracketMode::analytic);
    };
  }
  return MatrixSymbol(
      a.dim(), [a, b](const PhasePoint& pt) -> CMatrix { return a(pt) * b(pt); }, jet,
      a.traits().merged(b.traits()));
}

MatrixSymbol sum(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.dim() != b.dim()) throw ArgumentError("sum: dimension mismatch");
  MatrixSymbol::JetEvaluator jet;
  if (a.has_gradients() && b.has_gradients()) {
    jet = [a, b](const PhasePoint& pt) {
      return a.jet(pt, BracketMode::analytic) + b.jet(pt, BracketMode::analytic);
    };
  }
  return MatrixSymbol(
      a.dim(), [a, b](const PhasePoint& pt) -> CMatrix { return a(pt) + b(pt); }, jet,
      a.traits().merged(b.traits()));
}

MatrixSymbol scaled(Complex s, const MatrixSymbol& a) {
  MatrixSymbol::JetEvaluator jet;
  if (a.has_gradients()) {
    jet = [s, a](const PhasePoint& pt) { return s * a.jet(pt, BracketMode::analytic); };
  }
  return MatrixSymbol(
      a.dim(), [s, a](const PhasePoint& pt) -> CMatrix { return s * a(pt); }, jet, a.traits());
}

namespace {

MatrixSymbol coordinate_symbol(int axis, bool momentum) {
  if (axis < 0 || axis > 2) throw ArgumentError("coordinate axis out of range");
  SymbolTraits traits;
  traits.q_axes = {false, false, false};
  traits.p_axes = {false, false, false};
  (momentum ? traits.p_axes : traits.q_axes)[axis] = true;
  auto eval = [axis, momentum](const PhasePoint& pt) {
    return CMatrix::Constant(1, 1, momentum ? pt.p(axis) : pt.q(axis));
  };
  auto jet = [eval, axis, momentum](const PhasePoint& pt) {
    SymbolJet j = SymbolJet::zero(1);
    j.value = eval(pt);
    (momentum ? j.dp : j.dq)[axis](0, 0) = 1.0;
    return j;
  };
  return MatrixSymbol(1, eval, jet, traits);
}

}  // namespace

MatrixSymbol coordinate_q(int axis) { return coordinate_symbol(axis, false); }
MatrixSymbol coordinate_p(int axis) { return coordinate_symbol(axis, true); }

void MatrixPolynomial::add(CMatrix coeff, std::array<int, 6> power) {
  if (coeff.rows() != dim_ || coeff.cols() != dim_) {
    throw ArgumentError("MatrixPolynomial: coefficient has wrong dimension");
  }
  terms_.push_back({std::move(coeff), power});
}

namespace {

std::array<double, 6> flatten(const PhasePoint& pt) {
  return {pt.q.x(), pt.q.y(), pt.q.z(), pt.p.x(), pt.p.y(), pt.p.z()};
}

double monomial(const std::array<double, 6>& z, const std::array<int, 6>& power, int skip) {
  double r = 1.0;
  for (int k = 0; k < 6; ++k) {
    const int n = (k == skip) ? power[k] - 1 : power[k];
    for (int i = 0; i < n; ++i) r *= z[k];
  }
  return r;
}

}  // namespace

CMatrix MatrixPolynomial::value(const PhasePoint& pt) const {
  const auto z = flatten(pt);
  CMatrix r = CMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) r += monomial(z, t.power, -1) * t.coeff;
  return r;
}

SymbolJet MatrixPolynomial::jet(const PhasePoint& pt) const {
  const auto z = flatten(pt);
  SymbolJet j = SymbolJet::zero(dim_);
  for (const auto& t : terms_) {
    j.value += monomial(z, t.power, -1) * t.coeff;
    for (int k = 0; k < 6; ++k) {
      if (t.power[k] == 0) continue;
      const CMatrix d = (t.power[k] * monomial(z, t.power, k)) * t.coeff;
      if (k < 3) {
        j.dq[k] += d;
      } else {
        j.dp[k - 3] += d;
      }
    }
  }
  return j;
}

MatrixSymbol MatrixPolynomial::symbol() const {
  auto self = std::make_shared<const MatrixPolynomial>(*this);
  SymbolTraits traits;
  traits.q_axes = {false, false, false};
  traits.p_axes = {false, false, false};
  for (const auto& t : terms_) {
    for (int k = 0; k < 3; ++k) {
      if (t.power[k] > 0) traits.q_axes[k] = true;
      if (t.power[k + 3] > 0) traits.p_axes[k] = true;
    }
  }
  return MatrixSymbol(
      dim_, [self](const PhasePoint& pt) { return self->value(pt); },
      [self](const PhasePoint& pt) { return self->jet(pt); }, traits);
}

MatrixPolynomial random_hermitian_polynomial(int dim, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  auto random_hermitian = [&]() {
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    }
    return CMatrix(0.5 * (m + m.adjoint()));
  };
  MatrixPolynomial poly(dim);
  poly.add(random_hermitian(), {0, 0, 0, 0, 0, 0});
  for (int k = 0; k < 6; ++k) {
    std::array<int, 6> power{};
    power[k] = 1;
    poly.add(random_hermitian(), power);
  }
  for (int k = 0; k < 6; ++k) {
    for (int l = k; l < 6; ++l) {
      std::array<int, 6> power{};
      power[k] += 1;
      power[l] += 1;
      poly.add(random_hermitian(), power);
    }
  }
  return poly;
}

}  // namespace scdirac
