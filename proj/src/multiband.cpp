#include "scdirac/multiband.hpp"

#include "scdirac/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace scdirac {

CMatrix BandDecomposition::reconstruct() const {
  CMatrix h = CMatrix::Zero(bands.front().projection.rows(), bands.front().projection.cols());
  for (const auto& b : bands) h += b.h * b.projection;
  return h;
}

BandDecomposition spectral_decompose(const CMatrix& h, const DecomposeOptions& opt) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ArgumentError("spectral_decompose: matrix must be square");
  if (!h.allFinite()) throw NumericalError("spectral_decompose: non-finite symbol", 0.0);
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double radius = ev.cwiseAbs().maxCoeff();
  const double scale = radius > 0.0 ? radius : 1.0;
  if (max_abs(h - sym) > 1e-10 * scale) throw ArgumentError("spectral_decompose: matrix is not Hermitian");
  const double gap_tol = opt.gap_rel * scale;
  const double cluster_tol = opt.cluster_rel * scale;

  BandDecomposition out;
  out.gap = std::numeric_limits<double>::infinity();
  const Eigen::Index n = ev.size();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i < n) {
      const double diff = ev(i) - ev(i - 1);
      if (diff <= gap_tol) {
        if (ev(i) - ev(start) >= cluster_tol) {
          throw BandCrossingError("spectral_decompose: eigenvalues " + std::to_string(ev(i - 1)) + " and " +
                                      std::to_string(ev(i)) + " are neither degenerate nor separated",
                                  diff);
        }
        continue;
      }
      out.gap = std::min(out.gap, diff);
    }
    BandInfo b;
    b.degeneracy = static_cast<int>(i - start);
    b.h = ev.segment(start, i - start).mean();
    const CMatrix v = eig.eigenvectors().middleCols(start, i - start);
    CMatrix p = v * v.adjoint();
    p = (0.5 * (p + p.adjoint())).eval();
    if (max_abs(CMatrix(p * p - p)) > 1e-14) {
      const CMatrix p2 = p * p;
      p = 3.0 * p2 - 2.0 * p2 * p;
    }
    b.projection = std::move(p);
    out.bands.push_back(std::move(b));
    start = i;
  }
  return out;
}

CMatrix band_spin_hamiltonian(const std::vector<BandJet>& jets, int j) {
  if (j < 0 || j >= static_cast<int>(jets.size())) throw ArgumentError("band index out of range");
  const BandJet& b = jets[static_cast<std::size_t>(j)];
  const CMatrix& p = b.p.value;
  CMatrix hs = -kI * commutator(p, poisson_bracket(b.h, b.p));
  hs += (-0.5 * kI * b.h.value) * (p * poisson_bracket(b.p, b.p) * p);
  for (std::size_t l = 0; l < jets.size(); ++l) {
    if (static_cast<int>(l) == j) continue;
    hs += (0.5 * kI * jets[l].h.value) * (p * poisson_bracket(jets[l].p, jets[l].p) * p);
  }
  return hs;
}

MultibandSymbol::MultibandSymbol(MatrixSymbol symbol, BracketMode mode, DecomposeOptions opt)
    : symbol_(std::move(symbol)), mode_(mode), opt_(opt) {
  if (mode_ == BracketMode::analytic && !symbol_.has_gradients()) {
    throw ArgumentError("MultibandSymbol: analytic mode needs a symbol with gradients");
  }
}

BandDecomposition MultibandSymbol::decompose(const PhasePoint& pt) const {
  return spectral_decompose(symbol_(pt), opt_);
}

namespace {

BandJet perturbation_jet(const BandDecomposition& d, std::size_t j, const SymbolJet& hj) {
  const BandInfo& b = d.bands[j];
  BandJet out;
  out.degeneracy = b.degeneracy;
  out.h.value = b.h;
  out.p.value = b.projection;
  auto derivative = [&](const CMatrix& dh, double& dhj) {
    dhj = (b.projection * dh).trace().real() / b.degeneracy;
    CMatrix dp = CMatrix::Zero(dh.rows(), dh.cols());
    for (std::size_t l = 0; l < d.bands.size(); ++l) {
      if (l == j) continue;
      const CMatrix& pl = d.bands[l].projection;
      dp += (pl * dh * b.projection + b.projection * dh * pl) / (b.h - d.bands[l].h);
    }
    return dp;
  };
  for (int i = 0; i < 3; ++i) {
    out.p.dq[i] = derivative(hj.dq[i], out.h.dq(i));
    out.p.dp[i] = derivative(hj.dp[i], out.h.dp(i));
  }
  return out;
}

}  // namespace

std::vector<BandJet> MultibandSymbol::band_jets(const PhasePoint& pt) const {
  const BandDecomposition d = decompose(pt);
  std::vector<BandJet> jets;
  jets.reserve(d.bands.size());
  if (mode_ == BracketMode::analytic) {
    const SymbolJet hj = symbol_.jet(pt, BracketMode::analytic);
    for (std::size_t j = 0; j < d.bands.size(); ++j) jets.push_back(perturbation_jet(d, j, hj));
    return jets;
  }
  for (std::size_t j = 0; j < d.bands.size(); ++j) {
    BandJet b;
    b.degeneracy = d.bands[j].degeneracy;
    b.h.value = d.bands[j].h;
    b.p.value = d.bands[j].projection;
    jets.push_back(std::move(b));
  }
  for (int axis = 0; axis < 6; ++axis) {
    const bool is_q = axis < 3;
    const int i = axis % 3;
    const double x = is_q ? pt.q(i) : pt.p(i);
    const double step = finite_difference_step(x);
    PhasePoint plus = pt, minus = pt;
    (is_q ? plus.q : plus.p)(i) = x + step;
    (is_q ? minus.q : minus.p)(i) = x - step;
    const BandDecomposition dp = decompose(plus);
    const BandDecomposition dm = decompose(minus);
    if (dp.bands.size() != d.bands.size() || dm.bands.size() != d.bands.size()) {
      throw BandCrossingError("band count changes within the finite-difference stencil", d.gap);
    }
    for (std::size_t j = 0; j < d.bands.size(); ++j) {
      const double dh = (dp.bands[j].h - dm.bands[j].h) / (2.0 * step);
      CMatrix dproj = (dp.bands[j].projection - dm.bands[j].projection) / (2.0 * step);
      if (is_q) {
        jets[j].h.dq(i) = dh;
        jets[j].p.dq[i] = std::move(dproj);
      } else {
        jets[j].h.dp(i) = dh;
        jets[j].p.dp[i] = std::move(dproj);
      }
    }
  }
  return jets;
}

CMatrix MultibandSymbol::spin_hamiltonian(int j, const PhasePoint& pt) const {
  return band_spin_hamiltonian(band_jets(pt), j);
}

std::pair<Vec3, Vec3> MultibandSymbol::flow(int j, const PhasePoint& pt) const {
  const std::vector<BandJet> jets = band_jets(pt);
  if (j < 0 || j >= static_cast<int>(jets.size())) throw ArgumentError("band index out of range");
  const ScalarJet& h = jets[static_cast<std::size_t>(j)].h;
  return {h.dp, -h.dq};
}

MatrixSymbol MultibandSymbol::projection_symbol(int j) const {
  auto self = std::make_shared<const MultibandSymbol>(*this);
  const auto idx = static_cast<std::size_t>(j);
  MatrixSymbol::JetEvaluator jet;
  if (mode_ == BracketMode::analytic) {
    jet = [self, idx](const PhasePoint& pt) { return self->band_jets(pt).at(idx).p; };
  }
  return MatrixSymbol(
      dim(), [self, idx](const PhasePoint& pt) { return self->decompose(pt).bands.at(idx).projection; }, jet,
      symbol_.traits());
}

MatrixSymbol MultibandSymbol::energy_symbol(int j) const {
  auto self = std::make_shared<const MultibandSymbol>(*this);
  const auto idx = static_cast<std::size_t>(j);
  const int n = dim();
  MatrixSymbol::JetEvaluator jet;
  if (mode_ == BracketMode::analytic) {
    jet = [self, idx, n](const PhasePoint& pt) {
      return self->band_jets(pt).at(idx).h * SymbolJet::constant(CMatrix::Identity(n, n));
    };
  }
  return MatrixSymbol(
      n,
      [self, idx, n](const PhasePoint& pt) -> CMatrix {
        return self->decompose(pt).bands.at(idx).h * CMatrix::Identity(n, n);
      },
      jet, symbol_.traits());
}

namespace {

struct BandState {
  PhasePoint pt;
  CVector phi;
};

struct BandRate {
  Vec3 dq, dp;
  CVector dphi;
};

BandRate band_rhs(const MultibandSymbol& sym, const BandState& x, int j, const std::vector<int>& degeneracies) {
  const std::vector<BandJet> jets = sym.band_jets(x.pt);
  bool same = jets.size() == degeneracies.size();
  for (std::size_t i = 0; same && i < jets.size(); ++i) same = jets[i].degeneracy == degeneracies[i];
  if (!same) throw BandCrossingError("band structure changed along the orbit", 0.0);
  const ScalarJet& h = jets.at(static_cast<std::size_t>(j)).h;
  return {h.dp, -h.dq, -kI * (band_spin_hamiltonian(jets, j) * x.phi)};
}

BandState advance(const BandState& x, const BandRate& k, double h) {
  return {{x.pt.q + h * k.dq, x.pt.p + h * k.dp}, x.phi + h * k.dphi};
}

BandSample band_sample(const MultibandSymbol& sym, const BandState& x, double t, int j) {
  const BandDecomposition d = sym.decompose(x.pt);
  const BandInfo& b = d.bands.at(static_cast<std::size_t>(j));
  BandSample s;
  s.t = t;
  s.q = x.pt.q;
  s.p = x.pt.p;
  s.h = b.h;
  s.spinor = x.phi;
  s.band_residual = (x.phi - b.projection * x.phi).norm();
  s.norm_err = std::abs(x.phi.norm() - 1.0);
  s.gap = d.gap;
  return s;
}

}  // namespace

BandRecord evolve_band_packet(const MultibandSymbol& sym, const BandPacket& packet, double t_final, double dt,
                              int stride) {
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (!(t_final >= 0.0)) throw ArgumentError("final time must be nonnegative");
  if (stride < 1) throw ArgumentError("stride must be at least 1");
  if (packet.spinor.size() != sym.dim()) throw ArgumentError("spinor dimension does not match the symbol");
  const long n = static_cast<long>(std::ceil(t_final / dt * (1.0 - 1e-12)));
  const double h = n > 0 ? t_final / static_cast<double>(n) : dt;
  const int j = packet.band;
  std::vector<int> degeneracies;
  for (const auto& b : sym.decompose(packet.pt).bands) degeneracies.push_back(b.degeneracy);
  if (j < 0 || j >= static_cast<int>(degeneracies.size())) throw ArgumentError("band index out of range");

  BandRecord rec;
  rec.band = j;
  rec.dt = h;
  BandState x{packet.pt, packet.spinor};
  double t = 0.0;
  try {
    rec.samples.push_back(band_sample(sym, x, 0.0, j));
    for (long step = 0; step < n; ++step) {
      t = static_cast<double>(step) * h;
      const BandRate k1 = band_rhs(sym, x, j, degeneracies);
      const BandRate k2 = band_rhs(sym, advance(x, k1, 0.5 * h), j, degeneracies);
      const BandRate k3 = band_rhs(sym, advance(x, k2, 0.5 * h), j, degeneracies);
      const BandRate k4 = band_rhs(sym, advance(x, k3, h), j, degeneracies);
      BandState next;
      next.pt.q = x.pt.q + (h / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
      next.pt.p = x.pt.p + (h / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
      next.phi = x.phi + (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
      if (!next.pt.q.allFinite() || !next.pt.p.allFinite() || !next.phi.allFinite()) {
        throw NumericalError("non-finite state in band packet evolution", t);
      }
      x = std::move(next);
      if ((step + 1) % stride == 0 || step + 1 == n) {
        rec.samples.push_back(band_sample(sym, x, step + 1 == n ? t_final : static_cast<double>(step + 1) * h, j));
      }
    }
  } catch (const BandCrossingError& e) {
    throw BandCrossingError(std::string(e.what()) + " (orbit time " + std::to_string(t) + ")", e.gap());
  }
  return rec;
}

void IdentityResiduals::record(const std::string& name, double value) {
  for (auto& e : entries) {
    if (e.first == name) {
      e.second = std::max(e.second, value);
      return;
    }
  }
  entries.emplace_back(name, value);
}

double IdentityResiduals::get(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.first == name) return e.second;
  }
  throw ArgumentError("no identity named " + name);
}

double IdentityResiduals::max() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.second);
  return m;
}

MatrixSymbol random_band_diagonal_symbol(const MultibandSymbol& sym, const PhasePoint& probe, std::uint64_t seed) {
  const int m = static_cast<int>(sym.decompose(probe).bands.size());
  MatrixSymbol w;
  for (int j = 0; j < m; ++j) {
    const MatrixSymbol p = sym.projection_symbol(j);
    const MatrixSymbol x = random_hermitian_polynomial(sym.dim(), seed + 7919u * static_cast<std::uint64_t>(j)).symbol();
    const MatrixSymbol term = product(product(p, x), p);
    w = j == 0 ? term : sum(w, term);
  }
  return w;
}

IdentityResiduals verify_bracket_identities(const MultibandSymbol& sym, const PhasePoint& pt, std::uint64_t seed) {
  const BracketMode mode = sym.mode();
  const int n = sym.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const MatrixSymbol w = random_band_diagonal_symbol(sym, pt, seed);
  const SymbolJet wj = w.jet(pt, mode);
  const CMatrix& wv = wj.value;
  const std::vector<BandJet> jets = sym.band_jets(pt);
  const int m = static_cast<int>(jets.size());

  auto bracket = [&](const MatrixSymbol& a, const MatrixSymbol& b) { return poisson_bracket(a, b, pt, mode); };
  std::vector<MatrixSymbol> proj, energy;
  for (int j = 0; j < m; ++j) {
    proj.push_back(sym.projection_symbol(j));
    energy.push_back(sym.energy_symbol(j));
  }

  IdentityResiduals r;
  CMatrix lhs_transport = CMatrix::Zero(n, n);
  CMatrix rhs_transport = CMatrix::Zero(n, n);
  const MatrixSymbol& h_full = sym.symbol();
  const CMatrix w_h = bracket(w, h_full) - bracket(h_full, w);
  for (int j = 0; j < m; ++j) {
    const auto J = static_cast<std::size_t>(j);
    const CMatrix& p = jets[J].p.value;
    const CMatrix h_p = bracket(energy[J], proj[J]);
    r.record("energy_projection_sandwich", max_abs(CMatrix(p * h_p * p)));

    const MatrixSymbol pwp = product(product(proj[J], w), proj[J]);
    const CMatrix pwp_v = p * wv * p;
    const CMatrix lhs12 = p * bracket(energy[J], w) * p;
    const CMatrix rhs12 = bracket(energy[J], pwp) - commutator(pwp_v, commutator(p, h_p));
    r.record("energy_bracket_rewrite", max_abs(CMatrix(lhs12 - rhs12)));

    const CMatrix pp = bracket(proj[J], proj[J]);
    const CMatrix lhs14 = p * (bracket(w, proj[J]) - bracket(proj[J], w)) * p;
    r.record("same_band_commutator", max_abs(CMatrix(lhs14 - commutator(wv, CMatrix(p * pp * p)))));

    for (int l = 0; l < m; ++l) {
      if (l == j) continue;
      const auto L = static_cast<std::size_t>(l);
      const CMatrix& p2 = jets[L].p.value;
      const CMatrix p2p2 = bracket(proj[L], proj[L]);
      const CMatrix p1p2 = bracket(proj[J], proj[L]);
      const CMatrix p2p1 = bracket(proj[L], proj[J]);
      r.record("cross_band_projection", max_abs(CMatrix(p * p2p2 + p1p2 * (id - p2))));
      r.record("cross_band_projection", max_abs(CMatrix(p2p2 * p + (id - p2) * p2p1)));

      const CMatrix lhs = p * (bracket(w, proj[L]) - bracket(proj[L], w)) * p;
      r.record("cross_band_commutator", max_abs(CMatrix(lhs + commutator(wv, CMatrix(p * p2p2 * p)))));

      const MatrixSymbol wp2 = product(w, proj[L]);
      r.record("cross_band_vanishing", max_abs(CMatrix(p * bracket(wp2, proj[J]) - bracket(proj[J], wp2) * p)));
    }

    lhs_transport += 0.5 * p * w_h * p;
    rhs_transport += -bracket(energy[J], pwp) - kI * commutator(band_spin_hamiltonian(jets, j), pwp_v);
  }
  r.record("transport_form", max_abs(CMatrix(lhs_transport - rhs_transport)));

  const MatrixSymbol a = random_hermitian_polynomial(n, seed + 1).symbol();
  const MatrixSymbol b = random_hermitian_polynomial(n, seed + 2).symbol();
  r.record("product_rule", check_product_identity(a, b, w, pt, mode));
  r.record("product_rule", check_product_identity(proj[0], a, b, pt, mode));
  return r;
}

}  // namespace scdirac
