#include "scdirac/run_config.hpp"

#include "scdirac/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace scdirac {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

RunMode parse_run_mode(const std::string& name) {
  if (name == "classical") return RunMode::classical;
  if (name == "spin") return RunMode::spin;
  if (name == "bmt") return RunMode::bmt;
  if (name == "compare") return RunMode::compare;
  if (name == "quantum") return RunMode::quantum;
  if (name == "convergence") return RunMode::convergence;
  if (name == "identities") return RunMode::identities;
  throw ConfigError("mode: unknown mode '" + name + "'");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::classical: return "classical";
    case RunMode::spin: return "spin";
    case RunMode::bmt: return "bmt";
    case RunMode::compare: return "compare";
    case RunMode::quantum: return "quantum";
    case RunMode::convergence: return "convergence";
    case RunMode::identities: return "identities";
  }
  return "classical";
}

FieldConfig FieldSpec::build() const {
  switch (kind) {
    case FieldKind::none: return FieldConfig::none();
    case FieldKind::uniform_b: return FieldConfig::uniform_b(b, center, gauge);
    case FieldKind::uniform_e: return FieldConfig::uniform_e(e);
    case FieldKind::crossed_eb: return FieldConfig::crossed_eb(e, b, gauge);
    case FieldKind::harmonic_phi: return FieldConfig::harmonic_phi(kappa, center);
    case FieldKind::custom_polynomial: {
      std::array<Polynomial, 3> vp{Polynomial(a[0]), Polynomial(a[1]), Polynomial(a[2])};
      return FieldConfig::custom_polynomial(Polynomial(phi), vp);
    }
  }
  return FieldConfig::none();
}

namespace {

// Typed access with key paths in every error message.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const std::string& key) const { return j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError("missing key '" + join(key) + "'");
    return Node(j_.at(key), join(key));
  }
  Node object(const std::string& key) const {
    Node n = at(key);
    if (!n.j_.is_object()) throw ConfigError(n.path_ + ": expected an object");
    return n;
  }
  double number() const {
    if (!j_.is_number()) throw ConfigError(path_ + ": expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path_ + ": must be finite");
    return v;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError(join(key) + ": must be positive");
    return v;
  }
  long integer() const {
    if (!j_.is_number_integer()) throw ConfigError(path_ + ": expected an integer");
    return j_.get<long>();
  }
  long integer(const std::string& key, long fallback) const { return has(key) ? at(key).integer() : fallback; }
  std::string string() const {
    if (!j_.is_string()) throw ConfigError(path_ + ": expected a string");
    return j_.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? at(key).string() : fallback;
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Node n = at(key);
    if (!n.j_.is_boolean()) throw ConfigError(n.path_ + ": expected true or false");
    return n.j_.get<bool>();
  }
  std::vector<double> numbers() const {
    if (!j_.is_array()) throw ConfigError(path_ + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.push_back(Node(j_[i], path_ + "[" + std::to_string(i) + "]").number());
    return out;
  }
  Vec3 vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    const Node n = at(key);
    const std::vector<double> v = n.numbers();
    if (v.size() != 3) throw ConfigError(n.path_ + ": expected 3 numbers");
    return {v[0], v[1], v[2]};
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& j_;
  std::string path_;
};

std::vector<Monomial> parse_monomials(const Node& n) {
  if (!n.raw().is_array()) throw ConfigError(n.path() + ": expected an array of {coeff, power} terms");
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < n.raw().size(); ++i) {
    const Node t(n.raw()[i], n.path() + "[" + std::to_string(i) + "]");
    Monomial m;
    m.coeff = t.at("coeff").number();
    const Node pw = t.at("power");
    const std::vector<double> p = pw.numbers();
    if (p.size() != 3) throw ConfigError(pw.path() + ": expected 3 exponents");
    for (int k = 0; k < 3; ++k) {
      if (p[static_cast<std::size_t>(k)] < 0 || p[static_cast<std::size_t>(k)] != std::floor(p[static_cast<std::size_t>(k)])) {
        throw ConfigError(pw.path() + ": exponents must be nonnegative integers");
      }
      m.power[static_cast<std::size_t>(k)] = static_cast<int>(p[static_cast<std::size_t>(k)]);
    }
    out.push_back(m);
  }
  return out;
}

FieldSpec parse_field(const Node& f) {
  FieldSpec s;
  s.kind = parse_field_kind(f.at("kind").string());
  const std::string gauge = f.string("gauge", "symmetric");
  if (gauge == "symmetric") {
    s.gauge = Gauge::symmetric;
  } else if (gauge == "landau") {
    s.gauge = Gauge::landau;
  } else {
    throw ConfigError("field.gauge: expected 'symmetric' or 'landau'");
  }
  s.center = f.vec3("center", Vec3::Zero());
  switch (s.kind) {
    case FieldKind::none: break;
    case FieldKind::uniform_b: s.b = f.vec3("B", Vec3::Zero()); if (!f.has("B")) f.at("B"); break;
    case FieldKind::uniform_e: s.e = f.vec3("E", Vec3::Zero()); if (!f.has("E")) f.at("E"); break;
    case FieldKind::crossed_eb:
      f.at("E");
      f.at("B");
      s.e = f.vec3("E", Vec3::Zero());
      s.b = f.vec3("B", Vec3::Zero());
      break;
    case FieldKind::harmonic_phi: s.kappa = f.at("kappa").number(); break;
    case FieldKind::custom_polynomial: {
      if (f.has("phi")) s.phi = parse_monomials(f.at("phi"));
      if (f.has("A")) {
        const Node a = f.at("A");
        if (!a.raw().is_array() || a.raw().size() != 3) throw ConfigError("field.A: expected three term lists");
        for (std::size_t i = 0; i < 3; ++i) s.a[i] = parse_monomials(Node(a.raw()[i], "field.A[" + std::to_string(i) + "]"));
      }
      break;
    }
  }
  try {
    (void)s.build();
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
  return s;
}

ojson monomials_json(const std::vector<Monomial>& terms) {
  ojson out = ojson::array();
  for (const auto& m : terms) out.push_back({{"coeff", m.coeff}, {"power", m.power}});
  return out;
}

ojson vec_json(const Vec3& v) { return ojson::array({v(0), v(1), v(2)}); }

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const Node root(doc, "");
  RunConfig c;
  c.scenario = root.string("scenario", "custom");
  c.mode = parse_run_mode(root.at("mode").string());
  c.seed = static_cast<std::uint64_t>(root.integer("seed", 42));
  if (root.has("output")) c.output_dir = root.object("output").string("dir", c.output_dir);
  if (c.mode == RunMode::identities) {
    if (root.has("identities")) {
      const auto id = root.object("identities");
      c.identity_points = static_cast<int>(id.integer("points", 50));
      c.identity_threshold_scale = id.positive("threshold_scale", 1.0);
    }
    if (c.identity_points < 1) throw ConfigError("identities.points: must be at least 1");
    return c;
  }

  if (root.has("particle")) {
    const Node p = root.object("particle");
    c.particle.mass = p.positive("mass", 1.0);
    c.particle.charge = p.number("charge", -1.0);
    c.particle.c = p.positive("c", 1.0);
  }
  try {
    c.particle.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("particle: ") + e.what());
  }
  c.field = parse_field(root.object("field"));

  const Node init = root.object("initial");
  c.q0 = init.vec3("q", Vec3::Zero());
  c.p0 = init.vec3("p", Vec3::Zero());
  c.spin_axis = init.vec3("spin_axis", Vec3(0, 0, 1));
  if (!(c.spin_axis.norm() > 0.0)) throw ConfigError("initial.spin_axis: must be nonzero");
  if (init.has("spinor")) {
    const Node sp = init.at("spinor");
    if (!sp.raw().is_array() || sp.raw().size() != 4) throw ConfigError("initial.spinor: expected four [re, im] pairs");
    Spinor4 v;
    for (std::size_t i = 0; i < 4; ++i) {
      const Node z(sp.raw()[i], "initial.spinor[" + std::to_string(i) + "]");
      const std::vector<double> reim = z.numbers();
      if (reim.size() != 2) throw ConfigError(z.path() + ": expected [re, im]");
      v(static_cast<Eigen::Index>(i)) = Complex(reim[0], reim[1]);
    }
    if (!(v.norm() > 0.0)) throw ConfigError("initial.spinor: must be nonzero");
    c.spinor = v / v.norm();
  }

  if (root.has("integrator")) {
    const Node in = root.object("integrator");
    c.dt = in.positive("dt", c.dt);
    c.t_final = in.positive("t_final", c.t_final);
    c.stride = static_cast<int>(in.integer("stride", 1));
    if (c.stride < 1) throw ConfigError("integrator.stride: must be at least 1");
  }

  const bool needs_grid = c.mode == RunMode::quantum || c.mode == RunMode::convergence;
  if (needs_grid) {
    const Node g = root.object("grid");
    GridSpec& spec = c.grid.grid;
    spec.dim = static_cast<int>(g.integer("dim", 1));
    if (spec.dim != 1 && spec.dim != 2) throw ConfigError("grid.dim: must be 1 or 2");
    const std::vector<double> n = g.at("n").numbers();
    const std::vector<double> len = g.at("length").numbers();
    if (static_cast<int>(n.size()) != spec.dim) throw ConfigError("grid.n: expected one entry per dimension");
    if (static_cast<int>(len.size()) != spec.dim) throw ConfigError("grid.length: expected one entry per dimension");
    std::vector<double> center(static_cast<std::size_t>(spec.dim), 0.0);
    if (g.has("center")) {
      center = g.at("center").numbers();
      if (static_cast<int>(center.size()) != spec.dim) throw ConfigError("grid.center: expected one entry per dimension");
    }
    for (int a = 0; a < spec.dim; ++a) {
      const auto i = static_cast<std::size_t>(a);
      if (n[i] != std::floor(n[i])) throw ConfigError("grid.n: expected integers");
      spec.n[i] = static_cast<int>(n[i]);
      spec.length[i] = len[i];
      spec.center[i] = center[i];
    }
    spec.eps = g.positive("eps", 0.1);
    try {
      spec.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    c.grid.sigma = g.positive("sigma", c.grid.sigma);
    c.grid.order = static_cast<int>(g.integer("order", 2));
    if (c.grid.order != 2 && c.grid.order != 4) throw ConfigError("grid.order: must be 2 or 4");
    c.grid.samples = static_cast<int>(g.integer("samples", c.grid.samples));
    if (c.grid.samples < 1) throw ConfigError("grid.samples: must be at least 1");
    c.grid.snapshots = g.boolean("snapshots", false);
    if (spec.dim == 2 && c.field.build().depends_on_axis(0) && c.field.build().depends_on_axis(1)) {
      throw ConfigError("field: on a 2D grid the potentials may depend on x or on y, not both");
    }
  }
  if (c.mode == RunMode::convergence) {
    if (root.has("convergence")) {
      const Node cv = root.object("convergence");
      if (cv.has("eps_list")) c.convergence.eps_list = cv.at("eps_list").numbers();
      c.convergence.sigma_coeff = cv.positive("sigma_coeff", c.convergence.sigma_coeff);
      c.convergence.dt_coeff = cv.positive("dt_coeff", c.convergence.dt_coeff);
      c.convergence.samples = static_cast<int>(cv.integer("samples", c.convergence.samples));
    }
    const auto& eps = c.convergence.eps_list;
    if (eps.empty()) throw ConfigError("convergence.eps_list: must not be empty");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (!(eps[i] > 0.0)) throw ConfigError("convergence.eps_list: entries must be positive");
      if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("convergence.eps_list: must be decreasing");
    }
    if (c.convergence.samples < 1) throw ConfigError("convergence.samples: must be at least 1");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string run_config_json(const RunConfig& c) {
  ojson j;
  j["scenario"] = c.scenario;
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  j["output"] = {{"dir", c.output_dir}};
  if (c.mode == RunMode::identities) {
    j["identities"] = {{"points", c.identity_points}, {"threshold_scale", c.identity_threshold_scale}};
    return j.dump(2);
  }
  j["particle"] = {{"mass", c.particle.mass}, {"charge", c.particle.charge}, {"c", c.particle.c}};
  ojson f;
  f["kind"] = std::string(to_string(c.field.kind));
  f["gauge"] = c.field.gauge == Gauge::landau ? "landau" : "symmetric";
  f["center"] = vec_json(c.field.center);
  switch (c.field.kind) {
    case FieldKind::none: break;
    case FieldKind::uniform_b: f["B"] = vec_json(c.field.b); break;
    case FieldKind::uniform_e: f["E"] = vec_json(c.field.e); break;
    case FieldKind::crossed_eb:
      f["E"] = vec_json(c.field.e);
      f["B"] = vec_json(c.field.b);
      break;
    case FieldKind::harmonic_phi: f["kappa"] = c.field.kappa; break;
    case FieldKind::custom_polynomial:
      f["phi"] = monomials_json(c.field.phi);
      f["A"] = ojson::array({monomials_json(c.field.a[0]), monomials_json(c.field.a[1]), monomials_json(c.field.a[2])});
      break;
  }
  j["field"] = f;
  ojson init;
  init["q"] = vec_json(c.q0);
  init["p"] = vec_json(c.p0);
  init["spin_axis"] = vec_json(c.spin_axis);
  if (c.spinor) {
    ojson sp = ojson::array();
    for (int i = 0; i < 4; ++i) sp.push_back({(*c.spinor)(i).real(), (*c.spinor)(i).imag()});
    init["spinor"] = sp;
  }
  j["initial"] = init;
  j["integrator"] = {{"dt", c.dt}, {"t_final", c.t_final}, {"stride", c.stride}};
  if (c.mode == RunMode::quantum || c.mode == RunMode::convergence) {
    const GridSpec& g = c.grid.grid;
    ojson grid;
    grid["dim"] = g.dim;
    ojson n = ojson::array(), len = ojson::array(), center = ojson::array();
    for (int a = 0; a < g.dim; ++a) {
      n.push_back(g.n[static_cast<std::size_t>(a)]);
      len.push_back(g.length[static_cast<std::size_t>(a)]);
      center.push_back(g.center[static_cast<std::size_t>(a)]);
    }
    grid["n"] = n;
    grid["length"] = len;
    grid["center"] = center;
    grid["eps"] = g.eps;
    grid["sigma"] = c.grid.sigma;
    grid["order"] = c.grid.order;
    grid["samples"] = c.grid.samples;
    grid["snapshots"] = c.grid.snapshots;
    j["grid"] = grid;
  }
  if (c.mode == RunMode::convergence) {
    j["convergence"] = {{"eps_list", c.convergence.eps_list},
                        {"sigma_coeff", c.convergence.sigma_coeff},
                        {"dt_coeff", c.convergence.dt_coeff},
                        {"samples", c.convergence.samples}};
  }
  return j.dump(2);
}

std::vector<ScenarioPreset> scenario_presets() {
  std::vector<ScenarioPreset> out;
  const double pi = std::acos(-1.0);

  RunConfig free;
  free.scenario = "free";
  free.mode = RunMode::spin;
  free.p0 = Vec3(0.5, 0.0, 0.0);
  free.spin_axis = Vec3(1.0, 1.0, 0.0);
  free.dt = 0.01;
  free.t_final = 10.0;
  out.push_back({"free", "field-free flight with constant helicity", free});

  // gamma = 2: |pi| = sqrt(3) m c; period 2 pi gamma m c / (|e| B)
  RunConfig cyc;
  cyc.scenario = "uniform_B_cyclotron";
  cyc.mode = RunMode::compare;
  cyc.field.kind = FieldKind::uniform_b;
  cyc.field.b = Vec3(0.0, 0.0, 1.0);
  cyc.q0 = Vec3(0.0, -std::sqrt(3.0), 0.0);
  cyc.p0 = Vec3(std::sqrt(3.0) - 0.5 * std::sqrt(3.0), 0.0, 0.0);
  cyc.spin_axis = Vec3(1.0, 0.0, 1.0);
  cyc.dt = 0.002;
  cyc.t_final = 5.0 * 2.0 * pi * 2.0;
  out.push_back({"uniform_B_cyclotron", "electron on a gamma = 2 cyclotron orbit, five periods", cyc});

  RunConfig drift;
  drift.scenario = "crossed_EB_drift";
  drift.mode = RunMode::compare;
  drift.field.kind = FieldKind::crossed_eb;
  drift.field.e = Vec3(0.3, 0.0, 0.0);
  drift.field.b = Vec3(0.0, 0.0, 1.0);
  drift.p0 = Vec3(0.0, 0.5, 0.2);
  drift.spin_axis = Vec3(0.0, 1.0, 1.0);
  drift.dt = 0.002;
  drift.t_final = 20.0;
  out.push_back({"crossed_EB_drift", "E x B drift with |E| < c |B|", drift});

  RunConfig trap;
  trap.scenario = "harmonic_trap";
  trap.mode = RunMode::quantum;
  trap.field.kind = FieldKind::harmonic_phi;
  trap.field.kappa = -1.0;  // e phi = q^2 / 2 for e = -1
  trap.q0 = Vec3(0.5, 0.0, 0.0);
  trap.p0 = Vec3(0.0, 0.0, 0.0);
  trap.spin_axis = Vec3(1.0, 0.0, 0.0);
  trap.dt = 0.005;
  trap.t_final = 4.0;
  trap.grid.grid.dim = 1;
  trap.grid.grid.n = {512, 1};
  trap.grid.grid.length = {12.0, 1.0};
  trap.grid.grid.eps = 0.05;
  trap.grid.sigma = 0.2;
  trap.grid.samples = 20;
  out.push_back({"harmonic_trap", "1D Dirac packet oscillating in a harmonic well", trap});

  const ConvergenceSetup cs = cyclotron_convergence_setup();
  RunConfig conv;
  conv.scenario = "convergence_2d_B";
  conv.mode = RunMode::convergence;
  conv.particle = cs.params;
  conv.field.kind = FieldKind::uniform_b;
  conv.field.b = Vec3(0.0, 0.0, 1.0);
  conv.field.gauge = Gauge::landau;
  conv.q0 = cs.q0;
  conv.p0 = cs.p0;
  conv.spin_axis = cs.spin_axis;
  conv.t_final = cs.t_final;
  conv.grid.grid = cs.grid;
  conv.grid.grid.eps = cs.eps_list.front();
  conv.grid.order = cs.order;
  conv.convergence.eps_list = cs.eps_list;
  conv.convergence.sigma_coeff = cs.sigma_coeff;
  conv.convergence.dt_coeff = cs.dt_coeff;
  conv.convergence.samples = cs.samples;
  out.push_back({"convergence_2d_B", "eps sweep of the 2D Dirac equation on half a cyclotron orbit", conv});
  for (auto& p : out) p.config.output_dir = "out/" + p.name;
  return out;
}

}  // namespace scdirac
