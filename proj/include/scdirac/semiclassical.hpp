#pragma once

#include "scdirac/dirac_symbol.hpp"

#include <iosfwd>
#include <vector>

namespace scdirac {

/// A Wigner measure concentrated on one phase point, carrying a band spinor.
struct DeltaPacket {
  PhasePoint pt;
  Spinor4 spinor = Spinor4::Zero();
  double weight = 1.0;
  Band band = Band::electron;
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double gamma = 1.0;
  double h = 0.0;
  Spinor4 spinor = Spinor4::Zero();
  Vec3 s = Vec3::Zero();
  double band_residual = 0.0;
  double norm_err = 0.0;
  // Phase velocity at the sample, kept for Hermite interpolation of the orbit.
  Vec3 dq = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

struct TrajectoryRecord {
  Band band = Band::electron;
  double dt = 0.0;
  std::vector<TrajectorySample> samples;

  double t_final() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// (q, p) at time t by cubic Hermite interpolation between stored samples.
  PhasePoint interpolate(double t) const;
};

PhaseVelocity classical_rhs(const DiracSymbol& sym, const PhasePoint& pt, Band band = Band::electron);

/// -i H_s phi, with the closed form H_be + H_nn for the electron band.
Spinor4 spinor_rhs(const DiracSymbol& sym, const Spinor4& phi, const PhasePoint& pt,
                   Band band = Band::electron);

/// s_k = <phi, P (e_k . S) P phi>.
Vec3 polarization(const DiracSymbol& sym, const Spinor4& phi, const PhasePoint& pt,
                  Band band = Band::electron);
inline Vec3 polarization(const DiracSymbol& sym, const DeltaPacket& packet) {
  return polarization(sym, packet.spinor, packet.pt, packet.band);
}

/// Unit spinor in the band polarized along a: the +1 eigenvector of P (a.S) P.
/// The phase is fixed by making the largest component real and positive.
Spinor4 make_band_spinor(const DiracSymbol& sym, const PhasePoint& pt, const Vec3& a,
                         Band band = Band::electron);

DeltaPacket make_packet(const DiracSymbol& sym, const PhasePoint& pt, const Vec3& polarization_axis,
                        Band band = Band::electron, double weight = 1.0);

/// Number of equal steps used to cover [0, t_final] with steps no longer than dt.
long step_count(double t_final, double dt);

/// Joint RK4 integration of orbit and spinor. The spinor is never re-projected;
/// the band residual is recorded as a diagnostic. Every `stride`-th step is kept.
TrajectoryRecord evolve_packet(const DiracSymbol& sym, const DeltaPacket& packet, double t_final,
                               double dt, int stride = 1);

std::vector<TrajectoryRecord> ensemble_evolve(const DiracSymbol& sym,
                                              const std::vector<DeltaPacket>& packets,
                                              double t_final, double dt, int stride = 1);

/// Weighted mean polarization of an ensemble at sample index k.
Vec3 ensemble_polarization(const std::vector<DeltaPacket>& packets,
                           const std::vector<TrajectoryRecord>& records, std::size_t k);

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);

}  // namespace scdirac
