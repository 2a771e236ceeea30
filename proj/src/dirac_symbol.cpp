#include "scdirac/dirac_symbol.hpp"

#include "scdirac/error.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace scdirac {

ComplexMatrix4 contract(const Vec3& v, const std::array<ComplexMatrix4, 3>& m) {
  return v(0) * m[0] + v(1) * m[1] + v(2) * m[2];
}

DiracSymbol::DiracSymbol(FieldConfig fields, ParticleParams params)
    : fields_(std::move(fields)), params_(params), gammas_(dirac_gammas()) {
  params_.validate();
  for (int i = 0; i < 3; ++i) {
    alpha_[i] = gammas_.gamma0 * gammas_.gamma[i];
    g5g0g_[i] = gammas_.gamma5 * gammas_.gamma0 * gammas_.gamma[i];
    gig5_[i] = gammas_.gamma[i] * gammas_.gamma5;
  }
}

KinematicState DiracSymbol::kinematics(const FieldSample& f, const PhasePoint& pt) const {
  const double m = params_.mass;
  const double c = params_.c;
  KinematicState k;
  k.pi = pt.p - (params_.charge / c) * f.a;
  k.p0 = std::sqrt(m * m * c * c + k.pi.squaredNorm());
  k.v = c * k.pi / k.p0;
  k.gamma = k.p0 / (m * c);
  return k;
}

KinematicState DiracSymbol::kinematics(const PhasePoint& pt) const { return kinematics(sample(pt), pt); }

ComplexMatrix4 DiracSymbol::kinetic_matrix(const Vec3& pi) const {
  return contract(pi, alpha_) + (params_.mass * params_.c) * gammas_.gamma0;
}

ComplexMatrix4 DiracSymbol::hamiltonian(const PhasePoint& pt) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  return params_.c * kinetic_matrix(k.pi) + (params_.charge * f.phi) * ComplexMatrix4::Identity();
}

BandEnergies DiracSymbol::band_energies(const PhasePoint& pt) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double shift = params_.charge * f.phi;
  return {params_.c * k.p0 + shift, -params_.c * k.p0 + shift};
}

double DiracSymbol::band_energy(const PhasePoint& pt, Band band) const {
  const BandEnergies e = band_energies(pt);
  return band == Band::electron ? e.plus : e.minus;
}

BandProjections DiracSymbol::projections(const PhasePoint& pt) const {
  const KinematicState k = kinematics(pt);
  const ComplexMatrix4 half_k = (0.5 / k.p0) * kinetic_matrix(k.pi);
  const ComplexMatrix4 half_id = 0.5 * ComplexMatrix4::Identity();
  return {half_id + half_k, half_id - half_k};
}

ComplexMatrix4 DiracSymbol::projection(const PhasePoint& pt, Band band) const {
  const BandProjections p = projections(pt);
  return band == Band::electron ? p.plus : p.minus;
}

ComplexMatrix4 DiracSymbol::spin_matrix(const Vec3& a, const PhasePoint& pt) const {
  const double norm = a.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ArgumentError("spin_matrix: orientation must be nonzero");
  const Vec3 n = a / norm;
  const KinematicState k = kinematics(pt);
  const double m = params_.mass;
  const double c = params_.c;
  const double a_pi = n.dot(k.pi);
  const Vec3 g = n - (a_pi / (k.p0 * (k.p0 + m * c))) * k.pi;
  return contract(g, gig5_) + (a_pi / k.p0) * gammas_.gamma5;
}

SpinHamiltonians DiracSymbol::spin_hamiltonians(const PhasePoint& pt) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double e = params_.charge;
  const double c = params_.c;
  const Vec3 force = f.e + k.v.cross(f.b) / c;
  const Vec3 v_cross_f = k.v.cross(force) / c;

  SpinHamiltonians h;
  h.berry = (e / (2.0 * k.p0)) *
            (contract(v_cross_f, g5g0g_) - (kI / k.p0) * contract(force, gammas_.gamma));
  const ComplexMatrix4 p_plus =
      0.5 * ComplexMatrix4::Identity() + (0.5 / k.p0) * kinetic_matrix(k.pi);
  h.no_name = (-e / (2.0 * k.p0)) * (p_plus * contract(f.b, g5g0g_) * p_plus);
  return h;
}

ComplexMatrix4 DiracSymbol::spin_hamiltonian(const PhasePoint& pt, Band band) const {
  if (band == Band::electron) return spin_hamiltonians(pt).total();
  return spin_hamiltonian_brackets(pt, band, BracketMode::analytic);
}

ComplexMatrix4 DiracSymbol::spin_hamiltonian_brackets(const PhasePoint& pt, Band band,
                                                      BracketMode mode) const {
  const Band other = band == Band::electron ? Band::positron : Band::electron;
  SymbolJet pj, pl;
  ScalarJet hj;
  double hl = band_energy(pt, other);
  if (mode == BracketMode::analytic) {
    pj = projection_jet(pt, band);
    pl = projection_jet(pt, other);
    hj = energy_jet(pt, band);
  } else {
    pj = finite_difference_jet(projection_symbol(band), pt);
    pl = finite_difference_jet(projection_symbol(other), pt);
    const SymbolJet h_id = finite_difference_jet(energy_symbol(band), pt);
    hj.value = h_id.value(0, 0).real();
    for (int i = 0; i < 3; ++i) {
      hj.dq(i) = h_id.dq[i](0, 0).real();
      hj.dp(i) = h_id.dp[i](0, 0).real();
    }
  }
  const CMatrix& p = pj.value;
  const CMatrix transport = poisson_bracket(hj, pj);
  CMatrix hs = -kI * commutator(p, transport);
  hs += (-0.5 * kI * hj.value) * (p * poisson_bracket(pj, pj) * p);
  hs += (0.5 * kI * hl) * (p * poisson_bracket(pl, pl) * p);
  return hs;
}

ComplexMatrix4 DiracSymbol::curly_pp_uncompressed(const PhasePoint& pt) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  return (-kI * params_.charge / (2.0 * params_.c * k.p0 * k.p0)) * contract(f.b, g5g0g_);
}

ComplexMatrix4 DiracSymbol::curly_pp(const PhasePoint& pt) const {
  const ComplexMatrix4 raw = curly_pp_uncompressed(pt);
  const BandProjections p = projections(pt);
  return p.plus * raw * p.plus + p.minus * raw * p.minus;
}

Mat3 DiracSymbol::dpi_dq(const FieldSample& f) const {
  return -(params_.charge / params_.c) * f.jacobian_a;
}

PhaseVelocity DiracSymbol::hamilton_flow(const PhasePoint& pt, Band band) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double sign = band == Band::electron ? 1.0 : -1.0;
  const double c = params_.c;
  // h = sign c p0 + e phi; dp0/dq_i = pi . dpi/dq_i / p0
  const Mat3 d = dpi_dq(f);
  PhaseVelocity flow;
  flow.dq = sign * c * k.pi / k.p0;
  flow.dp = -(sign * c / k.p0) * (d.transpose() * k.pi) - params_.charge * f.grad_phi;
  return flow;
}

ScalarJet DiracSymbol::energy_jet(const PhasePoint& pt, Band band) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double sign = band == Band::electron ? 1.0 : -1.0;
  const double c = params_.c;
  const Mat3 d = dpi_dq(f);
  ScalarJet j;
  j.value = sign * c * k.p0 + params_.charge * f.phi;
  j.dp = sign * c * k.pi / k.p0;
  j.dq = (sign * c / k.p0) * (d.transpose() * k.pi) + params_.charge * f.grad_phi;
  return j;
}

SymbolJet DiracSymbol::hamiltonian_jet(const PhasePoint& pt) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double c = params_.c;
  const double e = params_.charge;
  const Mat3 d = dpi_dq(f);
  SymbolJet j;
  j.value = c * kinetic_matrix(k.pi) + (e * f.phi) * ComplexMatrix4::Identity();
  for (int i = 0; i < 3; ++i) {
    j.dq[i] = c * contract(d.col(i), alpha_) + (e * f.grad_phi(i)) * ComplexMatrix4::Identity();
    j.dp[i] = c * alpha_[i];
  }
  return j;
}

SymbolJet DiracSymbol::projection_jet(const PhasePoint& pt, Band band) const {
  const FieldSample f = sample(pt);
  const KinematicState k = kinematics(f, pt);
  const double sign = band == Band::electron ? 1.0 : -1.0;
  const Mat3 d = dpi_dq(f);
  const ComplexMatrix4 kin = kinetic_matrix(k.pi);
  // dP = sign/2 (dK / p0 - K dp0 / p0^2), dK = sum_j dpi_j alpha_j
  auto derivative = [&](const Vec3& dpi) -> CMatrix {
    const double dp0 = k.pi.dot(dpi) / k.p0;
    return (0.5 * sign) * (contract(dpi, alpha_) / k.p0 - kin * (dp0 / (k.p0 * k.p0)));
  };
  SymbolJet j;
  j.value = 0.5 * ComplexMatrix4::Identity() + (0.5 * sign / k.p0) * kin;
  for (int i = 0; i < 3; ++i) {
    j.dq[i] = derivative(d.col(i));
    j.dp[i] = derivative(Vec3::Unit(i));
  }
  return j;
}

SymbolTraits DiracSymbol::traits() const {
  SymbolTraits t;
  for (int i = 0; i < 3; ++i) t.q_axes[i] = fields_.depends_on_axis(i);
  return t;
}

MatrixSymbol DiracSymbol::hamiltonian_symbol() const {
  auto self = std::make_shared<const DiracSymbol>(*this);
  return MatrixSymbol(
      4, [self](const PhasePoint& pt) -> CMatrix { return self->hamiltonian(pt); },
      [self](const PhasePoint& pt) { return self->hamiltonian_jet(pt); }, traits());
}

MatrixSymbol DiracSymbol::projection_symbol(Band band) const {
  auto self = std::make_shared<const DiracSymbol>(*this);
  // P depends on q only through A.
  SymbolTraits t;
  for (int i = 0; i < 3; ++i) {
    t.q_axes[i] = false;
    for (const auto& a : fields_.vector_potential()) t.q_axes[i] = t.q_axes[i] || a.depends_on(i);
  }
  return MatrixSymbol(
      4, [self, band](const PhasePoint& pt) -> CMatrix { return self->projection(pt, band); },
      [self, band](const PhasePoint& pt) { return self->projection_jet(pt, band); }, t);
}

MatrixSymbol DiracSymbol::energy_symbol(Band band) const {
  auto self = std::make_shared<const DiracSymbol>(*this);
  return MatrixSymbol(
      4,
      [self, band](const PhasePoint& pt) -> CMatrix {
        return self->band_energy(pt, band) * CMatrix::Identity(4, 4);
      },
      [self, band](const PhasePoint& pt) {
        return self->energy_jet(pt, band) * SymbolJet::constant(CMatrix::Identity(4, 4));
      },
      traits());
}

MatrixSymbol DiracSymbol::projected_spin_symbol(const Vec3& a, Band band) const {
  if (!(a.norm() > 0.0)) throw ArgumentError("projected_spin_symbol: orientation must be nonzero");
  auto self = std::make_shared<const DiracSymbol>(*this);
  const MatrixSymbol proj = projection_symbol(band);
  return MatrixSymbol(
      4,
      [self, a, band](const PhasePoint& pt) -> CMatrix {
        const ComplexMatrix4 p = self->projection(pt, band);
        return p * self->spin_matrix(a, pt) * p;
      },
      {}, proj.traits());
}

}  // namespace scdirac
