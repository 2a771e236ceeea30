#include "scdirac/bmt.hpp"

#include "scdirac/error.hpp"
#include "scdirac/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace scdirac {

Vec3 bmt_rhs(const Vec3& s, const DiracSymbol& sym, const PhasePoint& pt) {
  const ParticleParams& prm = sym.params();
  const FieldSample f = sym.sample(pt);
  const KinematicState k = sym.kinematics(f, pt);
  const Vec3 omega = f.b / k.gamma - k.v.cross(f.e) / (prm.c * (1.0 + k.gamma));
  return (prm.charge / (prm.mass * prm.c)) * s.cross(omega);
}

SpinSeries evolve_bmt(const Vec3& s0, const TrajectoryRecord& trajectory, double dt, const DiracSymbol& sym) {
  if (!s0.allFinite()) throw ArgumentError("evolve_bmt: initial spin is not finite");
  if (trajectory.samples.empty() || trajectory.samples.front().t != 0.0) {
    throw ArgumentError("evolve_bmt: trajectory must start at t = 0");
  }
  const double t_final = trajectory.t_final();
  const long n = step_count(t_final, dt);
  const double h = n > 0 ? t_final / static_cast<double>(n) : dt;

  SpinSeries out;
  out.t.reserve(static_cast<std::size_t>(n + 1));
  out.s.reserve(static_cast<std::size_t>(n + 1));
  Vec3 s = s0;
  out.t.push_back(0.0);
  out.s.push_back(s);
  PhasePoint a = trajectory.interpolate(0.0);
  for (long step = 0; step < n; ++step) {
    const double t = static_cast<double>(step) * h;
    const double t_next = step + 1 == n ? t_final : t + h;
    const PhasePoint mid = trajectory.interpolate(t + 0.5 * h);
    const PhasePoint b = trajectory.interpolate(t_next);
    const Vec3 k1 = bmt_rhs(s, sym, a);
    const Vec3 k2 = bmt_rhs(s + 0.5 * h * k1, sym, mid);
    const Vec3 k3 = bmt_rhs(s + 0.5 * h * k2, sym, mid);
    const Vec3 k4 = bmt_rhs(s + h * k3, sym, b);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!s.allFinite()) throw NumericalError("non-finite BMT spin", t);
    out.t.push_back(t_next);
    out.s.push_back(s);
    a = b;
  }
  return out;
}

BmtComparison compare_quantum_bmt(const DiracSymbol& sym, const DeltaPacket& packet, double t_final, double dt,
                                  const std::string& scenario) {
  if (packet.band != Band::electron) throw ArgumentError("compare_quantum_bmt: packet must be in the electron band");
  BmtComparison cmp;
  cmp.scenario = scenario;
  cmp.t_final = t_final;
  cmp.trajectory = evolve_packet(sym, packet, t_final, dt);
  cmp.dt = cmp.trajectory.dt;
  const SpinSeries bmt = evolve_bmt(polarization(sym, packet), cmp.trajectory, cmp.dt, sym);
  const auto& samples = cmp.trajectory.samples;
  const std::size_t n = std::min(samples.size(), bmt.s.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (samples[i].s - bmt.s[i]).norm();
    cmp.t.push_back(samples[i].t);
    cmp.s_quantum.push_back(samples[i].s);
    cmp.s_bmt.push_back(bmt.s[i]);
    cmp.deviation.push_back(d);
    cmp.max_deviation = std::max(cmp.max_deviation, d);
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const BmtComparison& cmp) {
  out << "t,sq_x,sq_y,sq_z,sbmt_x,sbmt_y,sbmt_z,deviation\n";
  for (std::size_t i = 0; i < cmp.t.size(); ++i) {
    out << fmt_double(cmp.t[i]);
    for (int k = 0; k < 3; ++k) out << ',' << fmt_double(cmp.s_quantum[i](k));
    for (int k = 0; k < 3; ++k) out << ',' << fmt_double(cmp.s_bmt[i](k));
    out << ',' << fmt_double(cmp.deviation[i]) << '\n';
  }
}

std::string comparison_summary_json(const BmtComparison& cmp) {
  nlohmann::ordered_json j;
  j["max_deviation"] = cmp.max_deviation;
  j["dt"] = cmp.dt;
  j["t_final"] = cmp.t_final;
  j["scenario"] = cmp.scenario;
  return j.dump(2);
}

}  // namespace scdirac
