#pragma once

// SU(2) and SO(3) elements, their exponential maps and the two-to-one
// projection between them.
//
// Quaternion <-> 2x2 unitary identification (the only place where the
// half-angle sign convention lives):
//
//     q = (w, x, y, z)   <->   U(q) = w*I - i*(x*sx + y*sy + z*sz)
//
//                              | w - i z     -y - i x |
//                           =  |                      |
//                              | y - i x      w + i z |
//
// so that su2_from_axis_angle(n, t) = (cos(t/2), sin(t/2) n) is
// exp(-i t (sigma . n) / 2).  Under this table the Hamilton product of
// quaternions is the matrix product, and project() sends q and -q to the
// right-handed rotation by t about n.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>

namespace spinball {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Axes passed to the exponential maps must be unit within this tolerance.
inline constexpr double kAxisTolerance = 1e-9;
// Spinors are accepted as normalized within this tolerance.
inline constexpr double kSpinorTolerance = 1e-9;
// relative() refuses angles this close to a half turn.
inline constexpr double kHalfTurnMargin = 1e-9;

// Two complex amplitudes on |up> and |down>.
struct Spinor {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  static Spinor up() { return {Complex{1.0, 0.0}, Complex{0.0, 0.0}}; }
  static Spinor down() { return {Complex{0.0, 0.0}, Complex{1.0, 0.0}}; }

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
  bool is_normalized(double tol = kSpinorTolerance) const;
  Spinor normalized() const;
};

Spinor operator*(Complex factor, const Spinor& s);
// <a|b>
Complex inner(const Spinor& a, const Spinor& b);
// max(|a.alpha - b.alpha|, |a.beta - b.beta|)
double distance(const Spinor& a, const Spinor& b);

// Unit quaternion standing for an element of SU(2); see the table above.
class SU2Element {
 public:
  SU2Element() = default;

  // Normalizes the given components. Throws DomainError on a zero quaternion.
  static SU2Element from_components(double w, double x, double y, double z);
  // Keeps the components bit for bit; throws DomainError unless unit within 1e-9.
  static SU2Element from_unit_components(double w, double x, double y, double z);
  static SU2Element identity() { return {}; }
  static SU2Element minus_identity() { return SU2Element(-1.0, 0.0, 0.0, 0.0); }

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec3 vector_part() const { return {x_, y_, z_}; }

  Mat2c matrix() const;
  SU2Element inverse() const { return SU2Element(w_, -x_, -y_, -z_); }
  SU2Element operator-() const { return SU2Element(-w_, -x_, -y_, -z_); }

  // Euclidean dot product of the quaternion components.
  double dot(const SU2Element& other) const;
  // Componentwise max distance.
  double distance(const SU2Element& other) const;

 private:
  SU2Element(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

// A proper rotation matrix.
class SO3Element {
 public:
  SO3Element() : m_(Mat3::Identity()) {}

  // Validates orthogonality and det = +1 within 1e-9. Throws DomainError.
  static SO3Element from_matrix(const Mat3& m);
  static SO3Element identity() { return {}; }

  const Mat3& matrix() const { return m_; }
  SO3Element inverse() const;
  // Frobenius distance.
  double distance(const SO3Element& other) const { return (m_ - other.m_).norm(); }

 private:
  explicit SO3Element(const Mat3& m) : m_(m) {}
  friend SO3Element orthonormalized(const Mat3& m);

  Mat3 m_;
};

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

// exp(-i angle sigma.axis / 2). Throws DomainError when |axis| != 1.
SU2Element su2_from_axis_angle(const Vec3& axis, double angle);
// Rodrigues rotation, right-handed. Throws DomainError when |axis| != 1.
SO3Element so3_from_axis_angle(const Vec3& axis, double angle);

SO3Element project(const SU2Element& u);

// a∘b: b acts first. Results are renormalized.
SU2Element compose(const SU2Element& a, const SU2Element& b);
SO3Element compose(const SO3Element& a, const SO3Element& b);

Spinor apply(const SU2Element& u, const Spinor& s);
Vec3 rotate_vector(const SO3Element& r, const Vec3& v);

// One of the two lifts of r, the one with w >= 0.
SU2Element nearest_lift(const SO3Element& r);

// Axis and angle in [0, pi] of the unit quaternion with w >= 0 equal to +-u.
AxisAngle axis_angle(const SU2Element& u);

// (axis, angle) with so3_from_axis_angle(axis, angle) ∘ a == b.
// Throws AmbiguousRelativeRotation when the angle is within 1e-9 of pi.
AxisAngle relative(const SO3Element& a, const SO3Element& b);

// Re-orthonormalizes a nearly orthogonal matrix (Gram-Schmidt on columns).
SO3Element orthonormalized(const Mat3& m);

// Unit-length copy; throws DomainError if |v| deviates from 1 by more than tol.
Vec3 require_unit(const Vec3& v, const char* what, double tol = kAxisTolerance);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace spinball
