#pragma once

#include "scdirac/linalg.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace scdirac {

/// Mass, signed charge and speed of light in Gaussian units (hbar = 1).
struct ParticleParams {
  double mass = 1.0;
  double charge = -1.0;
  double c = 1.0;

  void validate() const;
};

struct Monomial {
  double coeff = 0.0;
  std::array<int, 3> power{0, 0, 0};
};

/// Real polynomial in (q_x, q_y, q_z), stored as a list of monomials.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms);

  double value(const Vec3& q) const;
  Vec3 gradient(const Vec3& q) const;
  bool depends_on(int axis) const;
  bool empty() const { return terms_.empty(); }
  const std::vector<Monomial>& terms() const { return terms_; }

  void add(double coeff, std::array<int, 3> power);

 private:
  std::vector<Monomial> terms_;
};

enum class FieldKind { none, uniform_b, uniform_e, crossed_eb, harmonic_phi, custom_polynomial };
enum class Gauge { symmetric, landau };

FieldKind parse_field_kind(std::string_view name);
std::string_view to_string(FieldKind kind);

/// Static potentials phi(q), A(q). Every built-in kind compiles to
/// polynomials, so all derivatives are exact.
class FieldConfig {
 public:
  FieldConfig() = default;

  static FieldConfig none();
  /// A = 1/2 B x (q - center) in the symmetric gauge; the Landau gauge
  /// A = (-B_z (y - center_y), 0, 0) requires B along z.
  static FieldConfig uniform_b(const Vec3& b, const Vec3& center = Vec3::Zero(),
                               Gauge gauge = Gauge::symmetric);
  /// phi = -E . q
  static FieldConfig uniform_e(const Vec3& e);
  static FieldConfig crossed_eb(const Vec3& e, const Vec3& b, Gauge gauge = Gauge::symmetric);
  /// phi = kappa/2 |q - center|^2
  static FieldConfig harmonic_phi(double kappa, const Vec3& center = Vec3::Zero());
  static FieldConfig custom_polynomial(Polynomial phi, std::array<Polynomial, 3> vector_potential);

  FieldKind kind() const { return kind_; }
  Gauge gauge() const { return gauge_; }
  const Polynomial& phi() const { return phi_; }
  const std::array<Polynomial, 3>& vector_potential() const { return a_; }

  bool has_vector_potential() const;
  /// True when phi or A depends on q_axis.
  bool depends_on_axis(int axis) const;

 private:
  FieldKind kind_ = FieldKind::none;
  Gauge gauge_ = Gauge::symmetric;
  Polynomial phi_;
  std::array<Polynomial, 3> a_;
};

/// Potentials and their first derivatives at a point.
/// jacobian_a(i, j) = dA_i / dq_j.
struct FieldSample {
  double phi = 0.0;
  Vec3 a = Vec3::Zero();
  Vec3 grad_phi = Vec3::Zero();
  Mat3 jacobian_a = Mat3::Zero();
  Vec3 e = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

FieldSample eval_fields(const FieldConfig& cfg, const Vec3& q);

/// curl from a Jacobian with J(i, j) = dA_i / dq_j.
Vec3 curl_from_jacobian(const Mat3& jacobian);

}  // namespace scdirac
