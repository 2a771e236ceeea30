#include "scdirac/dirac_pde.hpp"

#include "scdirac/error.hpp"
#include "scdirac/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>

namespace scdirac {

namespace {

const double kPi = std::acos(-1.0);

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

SymbolTraits vector_potential_traits(const FieldConfig& f) {
  SymbolTraits t;
  for (int i = 0; i < 3; ++i) {
    t.q_axes[i] = false;
    for (const auto& a : f.vector_potential()) t.q_axes[i] = t.q_axes[i] || a.depends_on(i);
  }
  return t;
}

void apply(const kernels::MatrixField& m, Complex* data, bool parallel) {
  if (parallel) {
    kernels::parallel::apply_node_matrices(m, data);
  } else {
    kernels::serial::apply_node_matrices(m, data);
  }
}

}  // namespace

GridSymbol band_observable_symbol(const DiracSymbol& sym) {
  auto self = std::make_shared<const DiracSymbol>(sym);
  GridSymbol g;
  g.count = 4;
  g.traits = vector_potential_traits(sym.fields());
  g.eval = [self](const PhasePoint& pt, ComplexMatrix4* out) {
    const ComplexMatrix4 p = self->projection(pt, Band::electron);
    out[0] = p;
    for (int k = 0; k < 3; ++k) out[k + 1] = p * self->spin_matrix(Vec3::Unit(k), pt) * p;
  };
  return g;
}

PreparedPacket prepare_gaussian_packet(const DiracSymbol& sym, const GridSpec& grid, const Vec3& q0, const Vec3& p0,
                                       double sigma, const Spinor4& phi0, bool parallel) {
  grid.validate();
  if (!(sigma > 0.0)) throw ArgumentError("packet width must be positive");
  for (int a = 0; a < grid.dim; ++a) {
    const double lo = grid.origin(a), hi = grid.origin(a) + grid.length[a];
    if (q0(a) - 6.0 * sigma < lo || q0(a) + 6.0 * sigma > hi) {
      throw ArgumentError("packet does not fit the box: position tails reach the boundary on axis " + std::to_string(a));
    }
    const double p_nyquist = grid.eps * kPi / grid.spacing(a);
    if (std::abs(p0(a)) + 6.0 * grid.eps / (2.0 * sigma) > p_nyquist) {
      throw ArgumentError("packet does not fit the box: momentum tails exceed the grid resolution on axis " +
                          std::to_string(a));
    }
  }
  GridSpinor psi(grid);
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const Vec3 x = grid.position(i);
    double r2 = 0.0, phase = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      r2 += (x(a) - q0(a)) * (x(a) - q0(a));
      phase += p0(a) * x(a);
    }
    const Complex amp = std::exp(-r2 / (4.0 * sigma * sigma)) * std::exp(Complex(0.0, phase / grid.eps));
    for (int c = 0; c < 4; ++c) psi.node(i)[c] = amp * phi0(c);
  }
  psi.normalize();
  auto self = std::make_shared<const DiracSymbol>(sym);
  const GridSymbol proj = make_grid_symbol(
      [self](const PhasePoint& pt) { return self->projection(pt, Band::electron); }, vector_potential_traits(sym.fields()));
  PreparedPacket out{weyl_apply(proj, psi, parallel), 0.0};
  out.psi.normalize();
  out.positron_content = 1.0 - weyl_expectations(proj, out.psi, parallel)[0];
  return out;
}

SplitStepper::SplitStepper(const DiracSymbol& sym, const GridSpec& grid, double dt, int order, bool parallel)
    : sym_(sym), grid_(grid), dt_(dt), parallel_(parallel), fft_(std::make_shared<SpinorFft>(grid)) {
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (order == 2) {
    tables_.reserve(2);
    tables_.push_back(potential_table(0.5 * dt));
    tables_.push_back(kinetic_table(dt));
    stages_ = {{&tables_[0], &tables_[1]}, {&tables_[0], nullptr}};
  } else if (order == 4) {
    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2);
    const double w0 = -cbrt2 / (2.0 - cbrt2);
    tables_.reserve(4);
    tables_.push_back(potential_table(0.5 * w1 * dt));
    tables_.push_back(kinetic_table(w1 * dt));
    tables_.push_back(potential_table(0.5 * (w1 + w0) * dt));
    tables_.push_back(kinetic_table(w0 * dt));
    stages_ = {{&tables_[0], &tables_[1]}, {&tables_[2], &tables_[3]}, {&tables_[2], &tables_[1]}, {&tables_[0], nullptr}};
  } else {
    throw ArgumentError("splitting order must be 2 or 4");
  }
}

kernels::MatrixField SplitStepper::potential_table(double tau) const {
  // V = e phi - e alpha . A with alpha_i = gamma0 gamma_i; (alpha . A)^2 = |A|^2, so
  // exp(-i s V) = e^{-i s e phi} (cos(s a) - i s sinc(s a) M), M = -e alpha . A, a = |e| |A|.
  const double s = tau / grid_.eps;
  const double e = sym_.params().charge;
  kernels::MatrixField table(grid_.nodes());
  for (std::size_t i = 0; i < grid_.nodes(); ++i) {
    const FieldSample f = eval_fields(sym_.fields(), grid_.position(i));
    const ComplexMatrix4 m = -e * contract(f.a, sym_.alpha());
    const double a = std::abs(e) * f.a.norm();
    table[i] = std::exp(Complex(0.0, -s * e * f.phi)) *
               (std::cos(s * a) * ComplexMatrix4::Identity() - Complex(0.0, s * sinc(s * a)) * m);
  }
  return table;
}

kernels::MatrixField SplitStepper::kinetic_table(double tau) const {
  // c K(p) with K = alpha . p + m c beta squares to c^2 p0^2, so
  // exp(-i tau c K / eps) = cos(theta) - i sin(theta) K / p0 with theta = tau c p0 / eps.
  const double c = sym_.params().c;
  const double mc = sym_.params().mass * c;
  const ComplexMatrix4& beta = dirac_gammas().gamma0;
  const double inv_n = 1.0 / static_cast<double>(grid_.nodes());
  kernels::MatrixField table(grid_.nodes());
  for (std::size_t k = 0; k < grid_.nodes(); ++k) {
    const Vec3 p = grid_.momentum(k);
    const double p0 = std::sqrt(mc * mc + p.squaredNorm());
    const ComplexMatrix4 kin = contract(p, sym_.alpha()) + mc * beta;
    const double theta = tau * c * p0 / grid_.eps;
    // The inverse FFT normalization is folded in here.
    table[k] = inv_n * (std::cos(theta) * ComplexMatrix4::Identity() - Complex(0.0, std::sin(theta) / p0) * kin);
  }
  return table;
}

void SplitStepper::step(GridSpinor& psi) const {
  Complex* data = psi.data.data();
  for (const Stage& st : stages_) {
    apply(*st.potential, data, parallel_);
    if (st.kinetic == nullptr) continue;
    fft_->forward(data);
    apply(*st.kinetic, data, parallel_);
    fft_->backward(data);
  }
}

void SplitStepper::run(GridSpinor& psi, long n_steps) const {
  for (long i = 0; i < n_steps; ++i) step(psi);
}

GridSpinor evolve_split_step(const GridSpinor& psi, const SplitStepConfig& cfg, const DiracSymbol& sym, bool parallel) {
  if (cfg.n_steps < 0) throw ArgumentError("step count must be nonnegative");
  GridSpinor out = psi;
  SplitStepper(sym, psi.grid, cfg.dt, cfg.order, parallel).run(out, cfg.n_steps);
  return out;
}

GridSpinor free_propagate(const GridSpinor& psi, double t, const ParticleParams& params) {
  const GridSpec& grid = psi.grid;
  const SpinorFft fft(grid);
  GridSpinor out = psi;
  fft.forward(out.data.data());
  const DiracSymbol free(FieldConfig::none(), params);
  const double c = params.c, mc = params.mass * params.c;
  const double inv_n = 1.0 / static_cast<double>(grid.nodes());
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    const Vec3 p = grid.momentum(k);
    const double p0 = std::sqrt(mc * mc + p.squaredNorm());
    const double theta = t * c * p0 / grid.eps;
    const ComplexMatrix4 kin = contract(p, free.alpha()) + mc * dirac_gammas().gamma0;
    const ComplexMatrix4 u = std::cos(theta) * ComplexMatrix4::Identity() - Complex(0.0, std::sin(theta) / p0) * kin;
    Eigen::Map<Spinor4> v(out.data.data() + 4 * k);
    v = inv_n * (u * v).eval();
  }
  fft.backward(out.data.data());
  return out;
}

GridObservables grid_observables(const GridSpinor& psi, const DiracSymbol& sym, bool weyl, bool parallel) {
  const GridSpec& grid = psi.grid;
  GridObservables obs;
  const std::size_t nodes = grid.nodes();
  std::vector<double> rho(nodes);
  if (parallel) {
    kernels::parallel::node_density(psi.data.data(), nodes, rho.data());
  } else {
    kernels::serial::node_density(psi.data.data(), nodes, rho.data());
  }
  const double mass = kernels::serial::sum(rho.data(), nodes);
  obs.norm_err = std::abs(std::sqrt(mass * grid.cell_volume()) - 1.0);
  std::vector<double> moment(nodes);
  for (int a = 0; a < grid.dim; ++a) {
    for (std::size_t i = 0; i < nodes; ++i) moment[i] = rho[i] * grid.position(i)(a);
    obs.mean_x[static_cast<std::size_t>(a)] = kernels::serial::sum(moment.data(), nodes) / mass;
  }
  {
    const SpinorFft fft(grid);
    std::vector<Complex> spec = psi.data;
    fft.forward(spec.data());
    kernels::serial::node_density(spec.data(), nodes, rho.data());
    const double total = kernels::serial::sum(rho.data(), nodes);
    for (int a = 0; a < grid.dim; ++a) {
      for (std::size_t k = 0; k < nodes; ++k) moment[k] = rho[k] * grid.momentum(k)(a);
      obs.mean_p[static_cast<std::size_t>(a)] = kernels::serial::sum(moment.data(), nodes) / total;
    }
  }
  if (weyl) {
    const std::vector<double> e = weyl_expectations(band_observable_symbol(sym), psi, parallel);
    obs.has_band = true;
    obs.band_occupation = e[0];
    obs.s = Vec3(e[1], e[2], e[3]);
  }
  return obs;
}

void write_observables_csv(std::ostream& out, const std::vector<GridObservables>& series, int dim) {
  const char* axes[2] = {"x", "y"};
  out << "t";
  for (int a = 0; a < dim; ++a) out << ",mean_" << axes[a];
  for (int a = 0; a < dim; ++a) out << ",mean_p" << axes[a];
  out << ",band_occupation,sx,sy,sz,norm_err\n";
  for (const auto& o : series) {
    out << fmt_double(o.t);
    for (int a = 0; a < dim; ++a) out << ',' << fmt_double(o.mean_x[static_cast<std::size_t>(a)]);
    for (int a = 0; a < dim; ++a) out << ',' << fmt_double(o.mean_p[static_cast<std::size_t>(a)]);
    if (o.has_band) {
      out << ',' << fmt_double(o.band_occupation);
      for (int k = 0; k < 3; ++k) out << ',' << fmt_double(o.s(k));
    } else {
      out << ",,,,";
    }
    out << ',' << fmt_double(o.norm_err) << '\n';
  }
}

void write_density_snapshot(std::ostream& out, const GridSpinor& psi, double t) {
  const GridSpec& g = psi.grid;
  auto put_i32 = [&](std::int32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint32_t>(v) >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_f64 = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put_i32(g.dim);
  put_i32(g.n[0]);
  put_i32(g.dim == 2 ? g.n[1] : 1);
  put_f64(g.length[0]);
  put_f64(g.dim == 2 ? g.length[1] : 0.0);
  put_f64(t);
  std::vector<double> rho(g.nodes());
  kernels::serial::node_density(psi.data.data(), g.nodes(), rho.data());
  for (double r : rho) put_f64(r);
}

ConvergenceReport convergence_study(const ConvergenceSetup& setup) {
  if (setup.eps_list.empty()) throw ConfigError("convergence study needs at least one eps");
  for (std::size_t i = 1; i < setup.eps_list.size(); ++i) {
    if (!(setup.eps_list[i] < setup.eps_list[i - 1])) throw ConfigError("eps_list must be decreasing");
  }
  if (setup.samples < 1) throw ConfigError("samples must be at least 1");
  const DiracSymbol sym(setup.fields, setup.params);
  const PhasePoint start{setup.q0, setup.p0};
  const DeltaPacket packet = make_packet(sym, start, setup.spin_axis);

  ConvergenceReport report;
  for (double eps : setup.eps_list) {
    ConvergenceRun run;
    run.eps = eps;
    run.sigma = setup.sigma_coeff * std::sqrt(eps);
    GridSpec grid = setup.grid;
    grid.eps = eps;
    const long steps_per_sample = std::max<long>(
        1, static_cast<long>(std::ceil(setup.t_final / (setup.samples * setup.dt_coeff * std::pow(eps, 1.5)))));
    run.steps = steps_per_sample * setup.samples;
    run.dt = setup.t_final / static_cast<double>(run.steps);

    PreparedPacket prep = prepare_gaussian_packet(sym, grid, setup.q0, setup.p0, run.sigma, packet.spinor, setup.parallel);
    const SplitStepper stepper(sym, grid, run.dt, setup.order, setup.parallel);

    // Semiclassical reference on the same sample times, with a fine RK4 step.
    const double ref_dt = setup.t_final / (200.0 * setup.samples);
    const BmtComparison ref = compare_quantum_bmt(sym, packet, setup.t_final, ref_dt);
    const std::size_t stride = 200;

    GridSpinor psi = std::move(prep.psi);
    for (int k = 0; k <= setup.samples; ++k) {
      if (k > 0) stepper.run(psi, steps_per_sample);
      GridObservables obs = grid_observables(psi, sym, true, setup.parallel);
      obs.t = setup.t_final * k / setup.samples;
      const std::size_t idx = static_cast<std::size_t>(k) * stride;
      const Vec3 q_cl = ref.trajectory.samples.at(idx).q;
      const Vec3 s_bmt = ref.s_bmt.at(idx);
      double dx = 0.0;
      for (int a = 0; a < grid.dim; ++a) dx += std::pow(obs.mean_x[static_cast<std::size_t>(a)] - q_cl(a), 2);
      run.err_x = std::max(run.err_x, std::sqrt(dx));
      // <psi, Op(P+) psi> exceeds 1 by O(eps) already at t = 0, since Op(P+) is a
      // projection only to leading order; leakage is its change along the evolution.
      if (k == 0) run.occupation_defect = 1.0 - obs.band_occupation;
      run.leak = std::max(run.leak, std::abs(1.0 - obs.band_occupation - run.occupation_defect));
      run.err_s = std::max(run.err_s, (obs.s - s_bmt).norm());
      run.norm_drift = std::max(run.norm_drift, obs.norm_err);
      run.series.push_back(obs);
      run.q_classical.push_back(q_cl);
      run.s_bmt.push_back(s_bmt);
    }
    report.runs.push_back(std::move(run));
  }
  auto order = [](double e1, double e2, double a, double b) { return std::log(e1 / e2) / std::log(a / b); };
  for (std::size_t i = 1; i < report.runs.size(); ++i) {
    const auto& a = report.runs[i - 1];
    const auto& b = report.runs[i];
    report.order_x.push_back(order(a.err_x, b.err_x, a.eps, b.eps));
    report.order_leak.push_back(order(a.leak, b.leak, a.eps, b.eps));
    report.order_s.push_back(order(a.err_s, b.err_s, a.eps, b.eps));
  }
  return report;
}

std::string convergence_report_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json runs = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    nlohmann::ordered_json e;
    e["err_x"] = r.err_x;
    e["leak"] = r.leak;
    e["err_s"] = r.err_s;
    e["norm_drift"] = r.norm_drift;
    e["initial_occupation_defect"] = r.occupation_defect;
    e["sigma"] = r.sigma;
    e["dt"] = r.dt;
    e["steps"] = r.steps;
    nlohmann::ordered_json orders = nlohmann::ordered_json::object();
    if (i > 0) {
      orders["err_x"] = report.order_x[i - 1];
      orders["leak"] = report.order_leak[i - 1];
      orders["err_s"] = report.order_s[i - 1];
    }
    e["order_estimates"] = orders;
    runs[fmt_double(r.eps)] = e;
  }
  j["eps"] = runs;
  return j.dump(2);
}

ConvergenceSetup cyclotron_convergence_setup() {
  ConvergenceSetup s;
  s.params = ParticleParams{1.0, -1.0, 1.0};
  s.fields = FieldConfig::uniform_b({0, 0, 1.0}, Vec3::Zero(), Gauge::landau);
  // A = (y, 0, 0) here, so pi_x = p_x - y: kinetic momentum (1, 0) at y = -1 means p_x = 0.
  s.q0 = Vec3(0.0, -1.0, 0.0);
  s.p0 = Vec3(0.0, 0.0, 0.0);
  s.spin_axis = Vec3(1.0, 0.0, 1.0);
  const double gamma = std::sqrt(2.0);
  s.t_final = kPi * gamma;  // half the period 2 pi gamma m c / (|e| B)
  s.grid.dim = 2;
  s.grid.n = {256, 256};
  s.grid.length = {8.0, 8.0};
  s.grid.center = {0.0, 0.0};
  s.samples = 4;
  // Strang splitting at dt = 0.2 eps^1.5 leaves a splitting error of the size of
  // the band leakage itself; the fourth-order composition at twice that step does not.
  s.order = 4;
  s.dt_coeff = 0.4;
  return s;
}

}  // namespace scdirac
