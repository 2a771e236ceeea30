#pragma once

#include "scdirac/calculus.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace scdirac {

/// Thresholds for grouping eigenvalues into bands, relative to the spectral radius.
struct DecomposeOptions {
  double gap_rel = 1e-6;
  double cluster_rel = 1e-9;
};

struct BandInfo {
  double h = 0.0;
  CMatrix projection;
  int degeneracy = 0;
};

struct BandDecomposition {
  std::vector<BandInfo> bands;  // ascending energy
  double gap = 0.0;             // smallest distance between neighbouring bands; +inf for one band

  CMatrix reconstruct() const;
};

/// Eigenvalues of a Hermitian matrix grouped into degenerate bands. Throws
/// BandCrossingError when two eigenvalues are too close to be either one band
/// or two.
BandDecomposition spectral_decompose(const CMatrix& h, const DecomposeOptions& opt = {});

/// Band energy and projection of one band, with derivatives.
struct BandJet {
  ScalarJet h;
  SymbolJet p;
  int degeneracy = 0;
};

/// H_s of band j from band jets:
/// -i[P_j, {h_j, P_j}] - (i/2) h_j P_j{P_j,P_j}P_j + (i/2) sum_{l != j} h_l P_j{P_l,P_l}P_j.
CMatrix band_spin_hamiltonian(const std::vector<BandJet>& jets, int j);

/// A Hermitian matrix symbol together with the band structure it induces.
class MultibandSymbol {
 public:
  explicit MultibandSymbol(MatrixSymbol symbol, BracketMode mode = BracketMode::analytic,
                           DecomposeOptions opt = {});

  int dim() const { return symbol_.dim(); }
  BracketMode mode() const { return mode_; }
  const MatrixSymbol& symbol() const { return symbol_; }

  BandDecomposition decompose(const PhasePoint& pt) const;
  /// Analytic mode: derivatives of h_j and P_j by first-order perturbation theory
  /// from the symbol's gradients. Finite-difference mode: central differences of
  /// the decomposition itself.
  std::vector<BandJet> band_jets(const PhasePoint& pt) const;

  CMatrix spin_hamiltonian(int j, const PhasePoint& pt) const;
  /// dq/dt = grad_p h_j, dp/dt = -grad_q h_j.
  std::pair<Vec3, Vec3> flow(int j, const PhasePoint& pt) const;

  MatrixSymbol projection_symbol(int j) const;
  /// h_j times the identity.
  MatrixSymbol energy_symbol(int j) const;

 private:
  MatrixSymbol symbol_;
  BracketMode mode_;
  DecomposeOptions opt_;
};

struct BandPacket {
  int band = 0;
  PhasePoint pt;
  CVector spinor;
};

struct BandSample {
  double t = 0.0;
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  double h = 0.0;
  CVector spinor;
  double band_residual = 0.0;
  double norm_err = 0.0;
  double gap = 0.0;
};

struct BandRecord {
  int band = 0;
  double dt = 0.0;
  std::vector<BandSample> samples;
};

/// Joint RK4 for the orbit of band j and the spinor under H_s^(j), with the same
/// step layout as the Dirac packet integrator. A band crossing along the orbit
/// aborts with BandCrossingError naming the time.
BandRecord evolve_band_packet(const MultibandSymbol& sym, const BandPacket& packet, double t_final, double dt,
                              int stride = 1);

/// Named residuals of the bracket identities that the band transport rests on.
struct IdentityResiduals {
  std::vector<std::pair<std::string, double>> entries;
  void record(const std::string& name, double value);
  double get(const std::string& name) const;
  double max() const;
};

/// A random symbol commuting with every band projection: sum_j P_j X_j P_j with
/// random Hermitian polynomial X_j. The band count is read off at `probe`.
MatrixSymbol random_band_diagonal_symbol(const MultibandSymbol& sym, const PhasePoint& probe, std::uint64_t seed);

/// Evaluates, at pt and for every band (pair), the residuals of
///   P_j {h_j, P_j} P_j = 0                                  energy_projection_sandwich
///   P_j{h_j,W}P_j = {h_j, P_jWP_j} - [P_jWP_j, [P_j,{h_j,P_j}]]  energy_bracket_rewrite
///   A{B,C} - {A,B}C = {AB,C} - {A,BC}                       product_rule
///   P_j({W,P_j} - {P_j,W})P_j = [W, P_j{P_j,P_j}P_j]        same_band_commutator
///   P_1{P_2,P_2} = -{P_1,P_2}(1-P_2), mirrored              cross_band_projection
///   P_1({W,P_2} - {P_2,W})P_1 = -[W, P_1{P_2,P_2}P_1]        cross_band_commutator
///   P_1{WP_2,P_1} - {P_1,WP_2}P_1 = 0                       cross_band_vanishing
///   sum_j P_j (1/2)({W,H} - {H,W}) P_j
///     = sum_j (-{h_j, P_jWP_j} - i[H_s^(j), P_jWP_j])       transport_form
/// with W band-diagonal (seeded) and random polynomial A, B, C.
IdentityResiduals verify_bracket_identities(const MultibandSymbol& sym, const PhasePoint& pt,
                                            std::uint64_t seed);

}  // namespace scdirac
