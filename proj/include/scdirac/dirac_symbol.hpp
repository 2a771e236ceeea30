#pragma once

#include "scdirac/calculus.hpp"
#include "scdirac/fields.hpp"
#include "scdirac/gamma.hpp"
#include "scdirac/linalg.hpp"

#include <array>

namespace scdirac {

/// Energy bands of the Dirac symbol, in ascending order of energy.
enum class Band { positron = 0, electron = 1 };

/// Kinetic quantities at a phase point. v is the electron velocity c pi / p0.
struct KinematicState {
  Vec3 pi = Vec3::Zero();
  double p0 = 0.0;
  Vec3 v = Vec3::Zero();
  double gamma = 1.0;
};

struct BandEnergies {
  double plus = 0.0;
  double minus = 0.0;
};

struct BandProjections {
  ComplexMatrix4 plus;
  ComplexMatrix4 minus;
};

/// Berry and "no name" parts of the electron spin Hamiltonian.
struct SpinHamiltonians {
  ComplexMatrix4 berry;
  ComplexMatrix4 no_name;
  ComplexMatrix4 total() const { return berry + no_name; }
};

/// dq/dt and dp/dt of Hamilton's equations for one band.
struct PhaseVelocity {
  Vec3 dq = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

/// Closed-form phase-space functions of the Dirac matrix
/// H_D(q, p) = c gamma0 (gamma . pi + m c) + e phi, with pi = p - (e/c) A(q).
class DiracSymbol {
 public:
  DiracSymbol(FieldConfig fields, ParticleParams params);

  const FieldConfig& fields() const { return fields_; }
  const ParticleParams& params() const { return params_; }
  FieldSample sample(const PhasePoint& pt) const { return eval_fields(fields_, pt.q); }

  KinematicState kinematics(const PhasePoint& pt) const;
  KinematicState kinematics(const FieldSample& f, const PhasePoint& pt) const;

  ComplexMatrix4 hamiltonian(const PhasePoint& pt) const;
  BandEnergies band_energies(const PhasePoint& pt) const;
  double band_energy(const PhasePoint& pt, Band band) const;
  BandProjections projections(const PhasePoint& pt) const;
  ComplexMatrix4 projection(const PhasePoint& pt, Band band) const;

  /// Polarization matrix a.S; a is normalized, a zero vector throws ArgumentError.
  ComplexMatrix4 spin_matrix(const Vec3& a, const PhasePoint& pt) const;

  /// Closed forms of H_be and H_nn for the electron band.
  SpinHamiltonians spin_hamiltonians(const PhasePoint& pt) const;
  /// H_s of a band: closed form for the electron, bracket form for the positron.
  ComplexMatrix4 spin_hamiltonian(const PhasePoint& pt, Band band) const;
  /// H_s of a band evaluated from Poisson brackets of the band data.
  ComplexMatrix4 spin_hamiltonian_brackets(const PhasePoint& pt, Band band,
                                           BracketMode mode = BracketMode::analytic) const;

  /// {P+, P+} in closed form: the band-diagonal part of
  /// -i e / (2 c p0^2) gamma5 gamma0 gamma . B.
  ComplexMatrix4 curly_pp(const PhasePoint& pt) const;
  /// The matrix -i e / (2 c p0^2) gamma5 gamma0 gamma . B itself.
  ComplexMatrix4 curly_pp_uncompressed(const PhasePoint& pt) const;

  PhaseVelocity hamilton_flow(const PhasePoint& pt, Band band) const;

  SymbolJet hamiltonian_jet(const PhasePoint& pt) const;
  SymbolJet projection_jet(const PhasePoint& pt, Band band) const;
  ScalarJet energy_jet(const PhasePoint& pt, Band band) const;

  MatrixSymbol hamiltonian_symbol() const;
  MatrixSymbol projection_symbol(Band band) const;
  /// h_band * I, so that brackets with matrix symbols are well typed.
  MatrixSymbol energy_symbol(Band band) const;
  /// P_band (a.S) P_band, the observable whose expectation is the polarization.
  MatrixSymbol projected_spin_symbol(const Vec3& a, Band band = Band::electron) const;
  SymbolTraits traits() const;

  /// gamma0 gamma_i, gamma5 gamma0 gamma_i and gamma_i gamma5.
  const std::array<ComplexMatrix4, 3>& alpha() const { return alpha_; }
  const std::array<ComplexMatrix4, 3>& g5g0g() const { return g5g0g_; }

 private:
  /// K = gamma0 (gamma . pi + m c)
  ComplexMatrix4 kinetic_matrix(const Vec3& pi) const;
  /// d pi_j / d q_i = -(e/c) J(j, i); returned as a matrix D(j, i).
  Mat3 dpi_dq(const FieldSample& f) const;

  FieldConfig fields_;
  ParticleParams params_;
  GammaSet gammas_;
  std::array<ComplexMatrix4, 3> alpha_;
  std::array<ComplexMatrix4, 3> g5g0g_;
  std::array<ComplexMatrix4, 3> gig5_;
};

/// Sum_i v_i M_i for a triple of matrices.
ComplexMatrix4 contract(const Vec3& v, const std::array<ComplexMatrix4, 3>& m);

}  // namespace scdirac
