#pragma once

#include "scdirac/semiclassical.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace scdirac {

/// ds/dt = (e / m c) s x [B / gamma - (v x E) / (c (1 + gamma))], g = 2.
Vec3 bmt_rhs(const Vec3& s, const DiracSymbol& sym, const PhasePoint& pt);

struct SpinSeries {
  std::vector<double> t;
  std::vector<Vec3> s;
};

/// RK4 for the BMT spin along a recorded orbit; (q, p) between samples comes
/// from cubic Hermite interpolation. Output times are spaced by the step actually
/// used (t_final / ceil(t_final / dt)).
SpinSeries evolve_bmt(const Vec3& s0, const TrajectoryRecord& trajectory, double dt, const DiracSymbol& sym);

struct BmtComparison {
  std::string scenario;
  double dt = 0.0;
  double t_final = 0.0;
  double max_deviation = 0.0;
  std::vector<double> t;
  std::vector<Vec3> s_quantum;
  std::vector<Vec3> s_bmt;
  std::vector<double> deviation;
  TrajectoryRecord trajectory;
};

/// Evolves the packet and the BMT spin on the same orbit, starting from the
/// packet polarization, and records |s_quantum - s_bmt| at every step.
BmtComparison compare_quantum_bmt(const DiracSymbol& sym, const DeltaPacket& packet, double t_final,
                                  double dt, const std::string& scenario = "");

void write_comparison_csv(std::ostream& out, const BmtComparison& cmp);
/// {max_deviation, dt, t_final, scenario} as a JSON object.
std::string comparison_summary_json(const BmtComparison& cmp);

}  // namespace scdirac
