#include "scdirac/semiclassical.hpp"

#include "scdirac/error.hpp"
#include "scdirac/format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace scdirac {

PhasePoint TrajectoryRecord::interpolate(double t) const {
  if (samples.empty()) throw ArgumentError("interpolate: empty trajectory");
  const double t0 = samples.front().t;
  const double t1 = samples.back().t;
  const double slack = 1e-9 * std::max(1.0, std::abs(t1));
  if (t < t0 - slack || t > t1 + slack) throw ArgumentError("interpolate: time outside trajectory");
  if (samples.size() == 1) return {samples.front().q, samples.front().p};
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double x, const TrajectorySample& s) { return x < s.t; });
  std::size_t i = it == samples.begin() ? 0 : static_cast<std::size_t>(it - samples.begin()) - 1;
  i = std::min(i, samples.size() - 2);
  const TrajectorySample& a = samples[i];
  const TrajectorySample& b = samples[i + 1];
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return {h00 * a.q + h10 * h * a.dq + h01 * b.q + h11 * h * b.dq,
          h00 * a.p + h10 * h * a.dp + h01 * b.p + h11 * h * b.dp};
}

PhaseVelocity classical_rhs(const DiracSymbol& sym, const PhasePoint& pt, Band band) {
  return sym.hamilton_flow(pt, band);
}

Spinor4 spinor_rhs(const DiracSymbol& sym, const Spinor4& phi, const PhasePoint& pt, Band band) {
  return -kI * (sym.spin_hamiltonian(pt, band) * phi);
}

Vec3 polarization(const DiracSymbol& sym, const Spinor4& phi, const PhasePoint& pt, Band band) {
  const ComplexMatrix4 p = sym.projection(pt, band);
  const Spinor4 pphi = p * phi;
  Vec3 s;
  for (int k = 0; k < 3; ++k) {
    s(k) = pphi.dot(sym.spin_matrix(Vec3::Unit(k), pt) * pphi).real();
  }
  return s;
}

Spinor4 make_band_spinor(const DiracSymbol& sym, const PhasePoint& pt, const Vec3& a, Band band) {
  const ComplexMatrix4 p = sym.projection(pt, band);
  const ComplexMatrix4 m = p * sym.spin_matrix(a, pt) * p;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix4> eig(0.5 * (m + m.adjoint()));
  Spinor4 phi = eig.eigenvectors().col(3);
  Eigen::Index big = 0;
  phi.cwiseAbs().maxCoeff(&big);
  phi *= std::conj(phi(big)) / std::abs(phi(big));
  return phi.normalized();
}

DeltaPacket make_packet(const DiracSymbol& sym, const PhasePoint& pt, const Vec3& axis, Band band,
                        double weight) {
  return {pt, make_band_spinor(sym, pt, axis, band), weight, band};
}

long step_count(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("time step must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ArgumentError("final time must be nonnegative");
  return static_cast<long>(std::ceil(t_final / dt * (1.0 - 1e-12)));
}

namespace {

struct JointState {
  PhasePoint pt;
  Spinor4 phi;
};

struct JointRate {
  PhaseVelocity flow;
  Spinor4 dphi;
};

JointRate joint_rhs(const DiracSymbol& sym, const JointState& x, Band band) {
  return {sym.hamilton_flow(x.pt, band), spinor_rhs(sym, x.phi, x.pt, band)};
}

JointState advance(const JointState& x, const JointRate& k, double h) {
  return {{x.pt.q + h * k.flow.dq, x.pt.p + h * k.flow.dp}, x.phi + h * k.dphi};
}

bool finite(const JointState& x) {
  return x.pt.q.allFinite() && x.pt.p.allFinite() && x.phi.allFinite();
}

TrajectorySample make_sample(const DiracSymbol& sym, const JointState& x, double t, Band band,
                             const PhaseVelocity& flow) {
  TrajectorySample s;
  s.t = t;
  s.q = x.pt.q;
  s.p = x.pt.p;
  const KinematicState k = sym.kinematics(x.pt);
  s.v = flow.dq;
  s.gamma = k.gamma;
  s.h = sym.band_energy(x.pt, band);
  s.spinor = x.phi;
  s.s = polarization(sym, x.phi, x.pt, band);
  const ComplexMatrix4 p = sym.projection(x.pt, band);
  s.band_residual = (x.phi - p * x.phi).norm();
  s.norm_err = std::abs(x.phi.norm() - 1.0);
  s.dq = flow.dq;
  s.dp = flow.dp;
  return s;
}

}  // namespace

TrajectoryRecord evolve_packet(const DiracSymbol& sym, const DeltaPacket& packet, double t_final,
                               double dt, int stride) {
  const long n = step_count(t_final, dt);
  if (stride < 1) throw ArgumentError("stride must be at least 1");
  const double h = n > 0 ? t_final / static_cast<double>(n) : dt;
  const Band band = packet.band;

  TrajectoryRecord rec;
  rec.band = band;
  rec.dt = h;
  rec.samples.reserve(static_cast<std::size_t>(n / stride + 2));

  JointState x{packet.pt, packet.spinor};
  JointRate k1 = joint_rhs(sym, x, band);
  rec.samples.push_back(make_sample(sym, x, 0.0, band, k1.flow));
  for (long step = 0; step < n; ++step) {
    const double t = static_cast<double>(step) * h;
    const JointRate k2 = joint_rhs(sym, advance(x, k1, 0.5 * h), band);
    const JointRate k3 = joint_rhs(sym, advance(x, k2, 0.5 * h), band);
    const JointRate k4 = joint_rhs(sym, advance(x, k3, h), band);
    JointState next;
    next.pt.q = x.pt.q + (h / 6.0) * (k1.flow.dq + 2.0 * k2.flow.dq + 2.0 * k3.flow.dq + k4.flow.dq);
    next.pt.p = x.pt.p + (h / 6.0) * (k1.flow.dp + 2.0 * k2.flow.dp + 2.0 * k3.flow.dp + k4.flow.dp);
    next.phi = x.phi + (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    if (!finite(next) || !std::isfinite(sym.kinematics(next.pt).p0)) {
      throw NumericalError("non-finite state in packet evolution", t);
    }
    x = next;
    k1 = joint_rhs(sym, x, band);
    if (!k1.flow.dq.allFinite() || !k1.flow.dp.allFinite() || !k1.dphi.allFinite()) {
      throw NumericalError("non-finite field evaluation in packet evolution", t);
    }
    if ((step + 1) % stride == 0 || step + 1 == n) {
      const double t_next = step + 1 == n ? t_final : static_cast<double>(step + 1) * h;
      rec.samples.push_back(make_sample(sym, x, t_next, band, k1.flow));
    }
  }
  return rec;
}

std::vector<TrajectoryRecord> ensemble_evolve(const DiracSymbol& sym, const std::vector<DeltaPacket>& packets,
                                              double t_final, double dt, int stride) {
  double total = 0.0;
  for (const auto& p : packets) {
    if (p.weight < 0.0) throw ArgumentError("ensemble weights must be nonnegative");
    total += p.weight;
  }
  if (packets.empty() || std::abs(total - 1.0) > 1e-12) throw ArgumentError("ensemble weights must sum to 1");
  std::vector<TrajectoryRecord> out(packets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < packets.size(); ++i) out[i] = evolve_packet(sym, packets[i], t_final, dt, stride);
  return out;
}

Vec3 ensemble_polarization(const std::vector<DeltaPacket>& packets, const std::vector<TrajectoryRecord>& records,
                           std::size_t k) {
  Vec3 s = Vec3::Zero();
  for (std::size_t i = 0; i < packets.size(); ++i) s += packets[i].weight * records.at(i).samples.at(k).s;
  return s;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "t,qx,qy,qz,px,py,pz,vx,vy,vz,gamma,h_plus,sx,sy,sz,band_residual,norm_err\n";
  for (const auto& s : record.samples) {
    out << fmt_double(s.t);
    for (const Vec3* v : {&s.q, &s.p, &s.v}) {
      for (int i = 0; i < 3; ++i) out << ',' << fmt_double((*v)(i));
    }
    out << ',' << fmt_double(s.gamma) << ',' << fmt_double(s.h);
    for (int i = 0; i < 3; ++i) out << ',' << fmt_double(s.s(i));
    out << ',' << fmt_double(s.band_residual) << ',' << fmt_double(s.norm_err) << '\n';
  }
}

}  // namespace scdirac
