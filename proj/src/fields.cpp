#include "scdirac/fields.hpp"

#include "scdirac/error.hpp"

#include <cmath>
#include <utility>

namespace scdirac {

void ParticleParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("particle.mass must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("particle.c must be positive");
  if (!std::isfinite(charge)) throw ConfigError("particle.charge must be finite");
}

Polynomial::Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    for (int p : t.power) {
      if (p < 0) throw ConfigError("polynomial exponents must be non-negative");
    }
  }
}

void Polynomial::add(double coeff, std::array<int, 3> power) {
  if (coeff == 0.0) return;
  terms_.push_back({coeff, power});
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

double Polynomial::value(const Vec3& q) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    sum += t.coeff * ipow(q.x(), t.power[0]) * ipow(q.y(), t.power[1]) * ipow(q.z(), t.power[2]);
  }
  return sum;
}

Vec3 Polynomial::gradient(const Vec3& q) const {
  Vec3 g = Vec3::Zero();
  for (const auto& t : terms_) {
    for (int axis = 0; axis < 3; ++axis) {
      if (t.power[axis] == 0) continue;
      double term = t.coeff * t.power[axis];
      for (int k = 0; k < 3; ++k) term *= ipow(q(k), k == axis ? t.power[k] - 1 : t.power[k]);
      g(axis) += term;
    }
  }
  return g;
}

bool Polynomial::depends_on(int axis) const {
  for (const auto& t : terms_) {
    if (t.coeff != 0.0 && t.power[axis] > 0) return true;
  }
  return false;
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "none") return FieldKind::none;
  if (name == "uniform_B") return FieldKind::uniform_b;
  if (name == "uniform_E") return FieldKind::uniform_e;
  if (name == "crossed_EB") return FieldKind::crossed_eb;
  if (name == "harmonic_phi") return FieldKind::harmonic_phi;
  if (name == "custom_polynomial") return FieldKind::custom_polynomial;
  throw ConfigError("unknown field kind '" + std::string(name) + "'");
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::none: return "none";
    case FieldKind::uniform_b: return "uniform_B";
    case FieldKind::uniform_e: return "uniform_E";
    case FieldKind::crossed_eb: return "crossed_EB";
    case FieldKind::harmonic_phi: return "harmonic_phi";
    case FieldKind::custom_polynomial: return "custom_polynomial";
  }
  return "unknown";
}

namespace {

constexpr std::array<int, 3> kConst{0, 0, 0};
constexpr std::array<std::array<int, 3>, 3> kLinear{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

std::array<Polynomial, 3> magnetic_potential(const Vec3& b, const Vec3& center, Gauge gauge) {
  std::array<Polynomial, 3> a;
  if (gauge == Gauge::landau) {
    if (b.x() != 0.0 || b.y() != 0.0) throw ConfigError("Landau gauge requires B along z");
    a[0].add(-b.z(), kLinear[1]);
    a[0].add(b.z() * center.y(), kConst);
    return a;
  }
  // A = 1/2 B x (q - c)
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    a[i].add(0.5 * b(j), kLinear[k]);
    a[i].add(-0.5 * b(k), kLinear[j]);
    a[i].add(-0.5 * (b(j) * center(k) - b(k) * center(j)), kConst);
  }
  return a;
}

Polynomial electric_potential(const Vec3& e) {
  Polynomial phi;
  for (int i = 0; i < 3; ++i) phi.add(-e(i), kLinear[i]);
  return phi;
}

}  // namespace

FieldConfig FieldConfig::none() { return FieldConfig{}; }

FieldConfig FieldConfig::uniform_b(const Vec3& b, const Vec3& center, Gauge gauge) {
  FieldConfig f;
  f.kind_ = FieldKind::uniform_b;
  f.gauge_ = gauge;
  f.a_ = magnetic_potential(b, center, gauge);
  return f;
}

FieldConfig FieldConfig::uniform_e(const Vec3& e) {
  FieldConfig f;
  f.kind_ = FieldKind::uniform_e;
  f.phi_ = electric_potential(e);
  return f;
}

FieldConfig FieldConfig::crossed_eb(const Vec3& e, const Vec3& b, Gauge gauge) {
  FieldConfig f;
  f.kind_ = FieldKind::crossed_eb;
  f.gauge_ = gauge;
  f.phi_ = electric_potential(e);
  f.a_ = magnetic_potential(b, Vec3::Zero(), gauge);
  return f;
}

FieldConfig FieldConfig::harmonic_phi(double kappa, const Vec3& center) {
  FieldConfig f;
  f.kind_ = FieldKind::harmonic_phi;
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> sq{0, 0, 0};
    sq[i] = 2;
    f.phi_.add(0.5 * kappa, sq);
    f.phi_.add(-kappa * center(i), kLinear[i]);
  }
  f.phi_.add(0.5 * kappa * center.squaredNorm(), kConst);
  return f;
}

FieldConfig FieldConfig::custom_polynomial(Polynomial phi, std::array<Polynomial, 3> vector_potential) {
  FieldConfig f;
  f.kind_ = FieldKind::custom_polynomial;
  f.phi_ = std::move(phi);
  f.a_ = std::move(vector_potential);
  return f;
}

bool FieldConfig::has_vector_potential() const {
  for (const auto& p : a_) {
    if (!p.empty()) return true;
  }
  return false;
}

bool FieldConfig::depends_on_axis(int axis) const {
  if (phi_.depends_on(axis)) return true;
  for (const auto& p : a_) {
    if (p.depends_on(axis)) return true;
  }
  return false;
}

Vec3 curl_from_jacobian(const Mat3& j) {
  return {j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)};
}

FieldSample eval_fields(const FieldConfig& cfg, const Vec3& q) {
  FieldSample s;
  s.phi = cfg.phi().value(q);
  s.grad_phi = cfg.phi().gradient(q);
  for (int i = 0; i < 3; ++i) {
    s.a(i) = cfg.vector_potential()[i].value(q);
    s.jacobian_a.row(i) = cfg.vector_potential()[i].gradient(q).transpose();
  }
  s.e = -s.grad_phi;
  s.b = curl_from_jacobian(s.jacobian_a);
  return s;
}

}  // namespace scdirac
