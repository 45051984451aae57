#include "spinball/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinball/errors.hpp"

namespace spinball {

bool Spinor::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

Spinor Spinor::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw DomainError("cannot normalize a zero spinor");
  return {alpha / n, beta / n};
}

Spinor operator*(Complex factor, const Spinor& s) { return {factor * s.alpha, factor * s.beta}; }

Complex inner(const Spinor& a, const Spinor& b) {
  return std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
}

double distance(const Spinor& a, const Spinor& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

SU2Element SU2Element::from_components(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("quaternion has zero or non-finite norm");
  return SU2Element(w / n, x / n, y / n, z / n);
}

SU2Element SU2Element::from_unit_components(double w, double x, double y, double z) {
  const double n2 = w * w + x * x + y * y + z * z;
  if (!(std::abs(n2 - 1.0) <= 1e-9)) throw DomainError("quaternion is not unit");
  return SU2Element(w, x, y, z);
}

Mat2c SU2Element::matrix() const {
  const Complex i{0.0, 1.0};
  Mat2c m;
  m(0, 0) = w_ - i * z_;
  m(0, 1) = -y_ - i * x_;
  m(1, 0) = y_ - i * x_;
  m(1, 1) = w_ + i * z_;
  return m;
}

double SU2Element::dot(const SU2Element& o) const { return w_ * o.w_ + x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }

double SU2Element::distance(const SU2Element& o) const {
  return std::max({std::abs(w_ - o.w_), std::abs(x_ - o.x_), std::abs(y_ - o.y_), std::abs(z_ - o.z_)});
}

SO3Element SO3Element::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw DomainError("rotation matrix has non-finite entries");
  if ((m.transpose() * m - Mat3::Identity()).norm() > 1e-9) throw DomainError("matrix is not orthogonal");
  if (std::abs(m.determinant() - 1.0) > 1e-9) throw DomainError("matrix is not a proper rotation");
  return SO3Element(m);
}

SO3Element SO3Element::inverse() const { return SO3Element(Mat3(m_.transpose())); }

SO3Element orthonormalized(const Mat3& m) {
  Vec3 c0 = m.col(0).normalized();
  Vec3 c1 = (m.col(1) - c0.dot(m.col(1)) * c0).normalized();
  Vec3 c2 = c0.cross(c1);
  Mat3 r;
  r.col(0) = c0;
  r.col(1) = c1;
  r.col(2) = c2;
  return SO3Element(r);
}

Vec3 require_unit(const Vec3& v, const char* what, double tol) {
  const double n = v.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw DomainError(std::string(what) + " must be a unit vector (norm " + std::to_string(n) + ")");
  }
  return v / n;
}

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

SU2Element su2_from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 n = require_unit(axis, "rotation axis");
  if (!std::isfinite(angle)) throw DomainError("rotation angle must be finite");
  const double s = std::sin(angle / 2.0);
  return SU2Element::from_components(std::cos(angle / 2.0), s * n.x(), s * n.y(), s * n.z());
}

SO3Element so3_from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 n = require_unit(axis, "rotation axis");
  if (!std::isfinite(angle)) throw DomainError("rotation angle must be finite");
  Mat3 k;
  k << 0.0, -n.z(), n.y(),
       n.z(), 0.0, -n.x(),
       -n.y(), n.x(), 0.0;
  const Mat3 r = Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
  return orthonormalized(r);
}

SO3Element project(const SU2Element& u) {
  const double w = u.w(), x = u.x(), y = u.y(), z = u.z();
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return orthonormalized(r);
}

SU2Element compose(const SU2Element& a, const SU2Element& b) {
  // Hamilton product, equal to the 2x2 matrix product under the table in rotor.hpp.
  return SU2Element::from_components(a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z(),
                                     a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
                                     a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
                                     a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w());
}

SO3Element compose(const SO3Element& a, const SO3Element& b) { return orthonormalized(a.matrix() * b.matrix()); }

Spinor apply(const SU2Element& u, const Spinor& s) {
  const Mat2c m = u.matrix();
  return {m(0, 0) * s.alpha + m(0, 1) * s.beta, m(1, 0) * s.alpha + m(1, 1) * s.beta};
}

Vec3 rotate_vector(const SO3Element& r, const Vec3& v) { return r.matrix() * v; }

SU2Element nearest_lift(const SO3Element& rot) {
  // Shepperd: pick the largest of w^2, x^2, y^2, z^2 to divide by.
  const Mat3& m = rot.matrix();
  const double tr = m.trace();
  double w, x, y, z;
  if (tr >= m(0, 0) && tr >= m(1, 1) && tr >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = s / 4.0;
    x = (m(2, 1) - m(1, 2)) / s;
    y = (m(0, 2) - m(2, 0)) / s;
    z = (m(1, 0) - m(0, 1)) / s;
  } else if (m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    w = (m(2, 1) - m(1, 2)) / s;
    x = s / 4.0;
    y = (m(0, 1) + m(1, 0)) / s;
    z = (m(0, 2) + m(2, 0)) / s;
  } else if (m(1, 1) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
    w = (m(0, 2) - m(2, 0)) / s;
    x = (m(0, 1) + m(1, 0)) / s;
    y = s / 4.0;
    z = (m(1, 2) + m(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
    w = (m(1, 0) - m(0, 1)) / s;
    x = (m(0, 2) + m(2, 0)) / s;
    y = (m(1, 2) + m(2, 1)) / s;
    z = s / 4.0;
  }
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  return SU2Element::from_components(w, x, y, z);
}

AxisAngle axis_angle(const SU2Element& u) {
  SU2Element q = u.w() < 0.0 ? -u : u;
  const Vec3 v = q.vector_part();
  const double s = v.norm();
  AxisAngle out;
  out.angle = 2.0 * std::atan2(s, q.w());
  if (s > 0.0) out.axis = v / s;
  return out;
}

AxisAngle relative(const SO3Element& a, const SO3Element& b) {
  const SO3Element delta = orthonormalized(b.matrix() * a.matrix().transpose());
  const AxisAngle aa = axis_angle(nearest_lift(delta));
  if (aa.angle > kPi - kHalfTurnMargin) {
    throw AmbiguousRelativeRotation("relative rotation is a half turn (angle " + std::to_string(aa.angle) +
                                    "); both lifts are equally near");
  }
  return aa;
}

}  // namespace spinball
