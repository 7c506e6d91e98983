#include "softcap/quat.hpp"

#include <cmath>

namespace softcap {

namespace {

constexpr double kMinDirectionNorm = 1e-9;

Vec4 normalized_or_throw(const Vec4& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidInput("quaternion with zero or non-finite norm");
  }
  return q / n;
}

}  // namespace

Quaternion::Quaternion(double s, double x, double y, double z)
    : q_(normalized_or_throw(Vec4(s, x, y, z))) {}

Quaternion::Quaternion(const Vec4& coeffs) : q_(normalized_or_throw(coeffs)) {}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 k = axis.normalized();
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return Quaternion(std::cos(h), s * k.x(), s * k.y(), s * k.z());
}

Quaternion Quaternion::from_rotation_vector(const Vec3& theta) {
  const double angle = theta.norm();
  if (angle < 1e-12) {
    // Second-order expansion keeps the map smooth through zero.
    return Quaternion(1.0 - angle * angle / 8.0, 0.5 * theta.x(),
                      0.5 * theta.y(), 0.5 * theta.z());
  }
  return from_axis_angle(theta / angle, angle);
}

Quaternion Quaternion::conjugate() const {
  Quaternion c = *this;
  c.q_.tail<3>() = -c.q_.tail<3>();
  return c;
}

Quaternion Quaternion::canonical() const {
  Quaternion c = *this;
  if (c.q_[0] < 0.0) c.q_ = -c.q_;
  return c;
}

Vec3 Quaternion::rotation_vector() const {
  const Quaternion c = canonical();
  const Vec3 v = c.vec();
  const double vn = v.norm();
  if (vn < 1e-12) return 2.0 * v;
  const double angle = 2.0 * std::atan2(vn, c.scalar());
  return v * (angle / vn);
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat4 lmult(const Vec4& q) {
  Mat4 L;
  const double s = q[0];
  const Vec3 v = q.tail<3>();
  L(0, 0) = s;
  L.block<1, 3>(0, 1) = -v.transpose();
  L.block<3, 1>(1, 0) = v;
  L.block<3, 3>(1, 1) = s * Mat3::Identity() + skew(v);
  return L;
}

Vec4 hamilton_product(const Vec4& a, const Vec4& b) { return lmult(a) * b; }

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return Quaternion(hamilton_product(a.coeffs(), b.coeffs()));
}

Mat3 to_rotation(const Vec4& q_in) {
  const Vec4 q = normalized_or_throw(q_in);
  const double s = q[0];
  const Vec3 v = q.tail<3>();
  return (s * s - v.squaredNorm()) * Mat3::Identity() +
         2.0 * v * v.transpose() + 2.0 * s * skew(v);
}

double angle_between(const Quaternion& a, const Quaternion& b) {
  return (a.conjugate() * b).rotation_vector().norm();
}

Quaternion pointing_attitude(const Vec3& r, const Quaternion& q_prev) {
  const double rn = r.norm();
  if (!(rn >= kMinDirectionNorm)) {
    throw DegenerateGeometry("pointing_attitude: position norm below 1e-9");
  }
  const Mat3 R = to_rotation(q_prev);
  const Vec3 current = R * capture_axis();
  const Vec3 desired = -r / rn;
  const Vec3 cross = current.cross(desired);
  const double sin_angle = cross.norm();
  const double cos_angle = current.dot(desired);

  Quaternion increment;
  if (sin_angle < 1e-12) {
    if (cos_angle > 0.0) return q_prev.canonical();
    increment = Quaternion::from_axis_angle(R * Vec3::UnitX(), M_PI);
  } else {
    increment = Quaternion::from_axis_angle(cross / sin_angle,
                                            std::atan2(sin_angle, cos_angle));
  }
  return (increment * q_prev).canonical();
}

Quaternion terminal_attitude(const Quaternion& q_t_final) {
  const Quaternion flip = Quaternion::from_axis_angle(Vec3::UnitY(), -M_PI);
  return (q_t_final * flip).canonical();
}

}  // namespace softcap
