#include "scdirac/runner.hpp"

#include "scdirac/bmt.hpp"
#include "scdirac/error.hpp"
#include "scdirac/format.hpp"
#include "scdirac/identity_suite.hpp"
#include "scdirac/svg.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace scdirac {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  }

  std::ofstream open(const std::string& name, bool binary = false) {
    std::ofstream f(dir_ / name, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    files.push_back(name);
    return f;
  }
  void text(const std::string& name, const std::string& content) { open(name) << content; }

  std::vector<std::string> files;

 private:
  fs::path dir_;
};

ojson vec_json(const Vec3& v) { return ojson::array({v(0), v(1), v(2)}); }

DeltaPacket initial_packet(const RunConfig& c, const DiracSymbol& sym) {
  const PhasePoint pt{c.q0, c.p0};
  if (!c.spinor) return make_packet(sym, pt, c.spin_axis);
  DeltaPacket packet;
  packet.pt = pt;
  const Spinor4 projected = sym.projection(pt, Band::electron) * *c.spinor;
  if (projected.norm() < 1e-8) throw ConfigError("initial.spinor: no component in the electron band");
  packet.spinor = projected / projected.norm();
  return packet;
}

std::vector<double> times(const TrajectoryRecord& r) {
  std::vector<double> t;
  for (const auto& s : r.samples) t.push_back(s.t);
  return t;
}

std::vector<double> component(const std::vector<Vec3>& v, int k) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x(k));
  return out;
}

void orbit_and_spin_plots(Output& out, const TrajectoryRecord& r) {
  std::vector<Vec3> q, s;
  for (const auto& x : r.samples) {
    q.push_back(x.q);
    s.push_back(x.s);
  }
  out.text("orbit.svg", line_plot_svg("orbit projection", "q_x", "q_y", {{"orbit", component(q, 0), component(q, 1)}}));
  const auto t = times(r);
  out.text("spin.svg", line_plot_svg("polarization", "t", "s",
                                     {{"s_x", t, component(s, 0)}, {"s_y", t, component(s, 1)}, {"s_z", t, component(s, 2)}}));
}

ojson trajectory_summary(const TrajectoryRecord& r) {
  double norm_err = 0.0, band = 0.0, h_drift = 0.0;
  const double h0 = r.samples.front().h;
  for (const auto& s : r.samples) {
    norm_err = std::max(norm_err, s.norm_err);
    band = std::max(band, s.band_residual);
    h_drift = std::max(h_drift, std::abs(s.h - h0) / std::max(std::abs(h0), 1e-300));
  }
  const auto& last = r.samples.back();
  ojson j;
  j["samples"] = r.samples.size();
  j["final"] = {{"t", last.t}, {"q", vec_json(last.q)}, {"p", vec_json(last.p)}, {"s", vec_json(last.s)}};
  j["max_norm_err"] = norm_err;
  j["max_band_residual"] = band;
  j["energy_relative_drift"] = h_drift;
  return j;
}

ojson header(const RunConfig& c) {
  ojson j;
  j["scenario"] = c.scenario;
  j["mode"] = to_string(c.mode);
  return j;
}

RunResult finish(Output& out, ojson summary, int code = 0) {
  summary["files"] = out.files;  // files written before the summary itself
  const std::string text = summary.dump(2);
  out.text("summary.json", text + "\n");
  return RunResult{code, out.files, text};
}

RunResult run_trajectory(const RunConfig& c, Output& out, bool plots) {
  const DiracSymbol sym(c.field.build(), c.particle);
  const DeltaPacket packet = initial_packet(c, sym);
  const TrajectoryRecord r = evolve_packet(sym, packet, c.t_final, c.dt, c.stride);
  {
    auto f = out.open("trajectory.csv");
    write_trajectory_csv(f, r);
  }
  if (plots) orbit_and_spin_plots(out, r);
  ojson j = header(c);
  j["dt"] = r.dt;
  j["t_final"] = r.t_final();
  j["steps"] = step_count(c.t_final, c.dt);
  j.update(trajectory_summary(r));
  return finish(out, j);
}

RunResult run_bmt(const RunConfig& c, Output& out, bool plots) {
  const DiracSymbol sym(c.field.build(), c.particle);
  const DeltaPacket packet = initial_packet(c, sym);
  const TrajectoryRecord r = evolve_packet(sym, packet, c.t_final, c.dt, 1);
  const Vec3 s0 = polarization(sym, packet);
  const SpinSeries bmt = evolve_bmt(s0, r, c.dt, sym);
  {
    auto f = out.open("bmt.csv");
    f << "t,qx,qy,qz,sbmt_x,sbmt_y,sbmt_z\n";
    for (std::size_t i = 0; i < bmt.t.size(); i += static_cast<std::size_t>(c.stride)) {
      const Vec3& q = r.samples[i].q;
      f << fmt_double(bmt.t[i]) << ',' << fmt_double(q(0)) << ',' << fmt_double(q(1)) << ',' << fmt_double(q(2));
      for (int k = 0; k < 3; ++k) f << ',' << fmt_double(bmt.s[i](k));
      f << '\n';
    }
  }
  if (plots) {
    out.text("spin.svg", line_plot_svg("BMT spin", "t", "s",
                                       {{"s_x", bmt.t, component(bmt.s, 0)},
                                        {"s_y", bmt.t, component(bmt.s, 1)},
                                        {"s_z", bmt.t, component(bmt.s, 2)}}));
  }
  double drift = 0.0;
  for (const auto& s : bmt.s) drift = std::max(drift, std::abs(s.norm() - s0.norm()));
  ojson j = header(c);
  j["dt"] = r.dt;
  j["t_final"] = r.t_final();
  j["final_s_bmt"] = vec_json(bmt.s.back());
  j["spin_length_drift"] = drift;
  return finish(out, j);
}

RunResult run_compare(const RunConfig& c, Output& out, bool plots) {
  const DiracSymbol sym(c.field.build(), c.particle);
  const DeltaPacket packet = initial_packet(c, sym);
  const BmtComparison cmp = compare_quantum_bmt(sym, packet, c.t_final, c.dt, c.scenario);
  {
    auto f = out.open("comparison.csv");
    write_comparison_csv(f, cmp);
  }
  if (plots) {
    out.text("deviation.svg",
             line_plot_svg("|s_quantum - s_BMT|", "t", "deviation", {{"deviation", cmp.t, cmp.deviation}}));
    out.text("spin.svg", line_plot_svg("polarization", "t", "s",
                                       {{"quantum s_x", cmp.t, component(cmp.s_quantum, 0)},
                                        {"quantum s_z", cmp.t, component(cmp.s_quantum, 2)},
                                        {"BMT s_x", cmp.t, component(cmp.s_bmt, 0)},
                                        {"BMT s_z", cmp.t, component(cmp.s_bmt, 2)}}));
  }
  ojson j = header(c);
  j.update(ojson::parse(comparison_summary_json(cmp)));
  j.update(trajectory_summary(cmp.trajectory));
  return finish(out, j);
}

RunResult run_quantum(const RunConfig& c, Output& out, bool plots) {
  const DiracSymbol sym(c.field.build(), c.particle);
  const GridSpec& grid = c.grid.grid;
  const DeltaPacket packet = initial_packet(c, sym);
  PreparedPacket prep = prepare_gaussian_packet(sym, grid, c.q0, c.p0, c.grid.sigma, packet.spinor);
  const long total = step_count(c.t_final, c.dt);
  const long per_sample = std::max<long>(1, (total + c.grid.samples - 1) / c.grid.samples);
  const long steps = per_sample * c.grid.samples;
  const double dt = c.t_final / static_cast<double>(steps);
  const SplitStepper stepper(sym, grid, dt, c.grid.order);

  std::vector<GridObservables> series;
  GridSpinor psi = std::move(prep.psi);
  for (int k = 0; k <= c.grid.samples; ++k) {
    if (k > 0) stepper.run(psi, per_sample);
    GridObservables obs = grid_observables(psi, sym);
    obs.t = c.t_final * k / c.grid.samples;
    if (!std::isfinite(obs.norm_err) || obs.norm_err > 1e-6) {
      throw NumericalError("grid norm lost at t = " + fmt_double(obs.t), k > 0 ? series.back().t : 0.0);
    }
    series.push_back(obs);
    if (c.grid.snapshots) {
      char name[32];
      std::snprintf(name, sizeof name, "density_%04d.bin", k);
      auto f = out.open(name, true);
      write_density_snapshot(f, psi, obs.t);
    }
  }
  {
    auto f = out.open("observables.csv");
    write_observables_csv(f, series, grid.dim);
  }
  if (plots) {
    std::vector<double> t, x, y, sx, sy, sz;
    for (const auto& o : series) {
      t.push_back(o.t);
      x.push_back(o.mean_x[0]);
      y.push_back(o.mean_x[1]);
      sx.push_back(o.s(0));
      sy.push_back(o.s(1));
      sz.push_back(o.s(2));
    }
    if (grid.dim == 2) {
      out.text("orbit.svg", line_plot_svg("packet centroid", "<x>", "<y>", {{"centroid", x, y}}, true));
    } else {
      out.text("orbit.svg", line_plot_svg("packet centroid", "t", "<x>", {{"<x>", t, x}}, true));
    }
    out.text("spin.svg", line_plot_svg("polarization", "t", "s", {{"s_x", t, sx}, {"s_y", t, sy}, {"s_z", t, sz}}, true));
  }
  double norm_err = 0.0;
  for (const auto& o : series) norm_err = std::max(norm_err, o.norm_err);
  ojson j = header(c);
  j["eps"] = grid.eps;
  j["dt"] = dt;
  j["steps"] = steps;
  j["order"] = c.grid.order;
  j["initial_occupation_defect"] = prep.positron_content;
  j["max_norm_err"] = norm_err;
  const auto& last = series.back();
  j["final"] = {{"t", last.t},
                {"mean_x", last.mean_x},
                {"mean_p", last.mean_p},
                {"band_occupation", last.band_occupation},
                {"s", vec_json(last.s)}};
  return finish(out, j);
}

RunResult run_convergence(const RunConfig& c, Output& out, bool plots) {
  ConvergenceSetup s;
  s.fields = c.field.build();
  s.params = c.particle;
  s.q0 = c.q0;
  s.p0 = c.p0;
  s.spin_axis = c.spin_axis;
  s.eps_list = c.convergence.eps_list;
  s.t_final = c.t_final;
  s.grid = c.grid.grid;
  s.sigma_coeff = c.convergence.sigma_coeff;
  s.dt_coeff = c.convergence.dt_coeff;
  s.order = c.grid.order;
  s.samples = c.convergence.samples;
  const ConvergenceReport report = convergence_study(s);
  const std::string text = convergence_report_json(report);
  out.text("convergence.json", text + "\n");
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    auto f = out.open("observables_eps_" + fmt_double(report.runs[i].eps) + ".csv");
    write_observables_csv(f, report.runs[i].series, s.grid.dim);
  }
  if (plots) {
    std::vector<double> le, lx, ll, ls;
    for (const auto& r : report.runs) {
      le.push_back(std::log10(r.eps));
      lx.push_back(std::log10(r.err_x));
      ll.push_back(std::log10(r.leak));
      ls.push_back(std::log10(r.err_s));
    }
    out.text("convergence.svg", line_plot_svg("errors against eps", "log10 eps", "log10 error",
                                              {{"err_x", le, lx}, {"leak", le, ll}, {"err_s", le, ls}}));
  }
  ojson j = header(c);
  j["report"] = ojson::parse(text);
  return finish(out, j);
}

RunResult run_identities(const RunConfig& c, Output& out) {
  const IdentitySuiteReport report = run_identity_suite(c.seed, c.identity_points, c.identity_threshold_scale);
  out.text("identities.json", identity_report_json(report) + "\n");
  ojson j = header(c);
  j["seed"] = c.seed;
  j["points"] = c.identity_points;
  j["threshold_scale"] = c.identity_threshold_scale;
  j["passed"] = report.passed();
  return finish(out, j, report.passed() ? 0 : 4);
}

}  // namespace

RunResult run_scenario(const RunConfig& config, const std::string& out_dir, bool plots) {
  Output out(out_dir);
  switch (config.mode) {
    case RunMode::classical:
    case RunMode::spin: return run_trajectory(config, out, plots);
    case RunMode::bmt: return run_bmt(config, out, plots);
    case RunMode::compare: return run_compare(config, out, plots);
    case RunMode::quantum: return run_quantum(config, out, plots);
    case RunMode::convergence: return run_convergence(config, out, plots);
    case RunMode::identities: return run_identities(config, out);
  }
  return {};
}

std::string error_json(int code, const std::string& type, const std::string& message) {
  ojson j;
  j["error"] = {{"code", code}, {"type", type}, {"message", message}};
  return j.dump();
}

}  // namespace scdirac
