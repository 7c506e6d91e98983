#pragma once

// Unit quaternions, scalar-first [q_s, q_v], Hamilton product, right-handed.
// A quaternion q describes the rotation taking body coordinates to the
// parent frame: v_parent = Q(q) v_body.

#include "softcap/types.hpp"

namespace softcap {

class Quaternion {
 public:
  Quaternion() : q_(1.0, 0.0, 0.0, 0.0) {}
  Quaternion(double s, double x, double y, double z);
  explicit Quaternion(const Vec4& coeffs);

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle);
  // Exponential map of a rotation vector (axis * angle).
  static Quaternion from_rotation_vector(const Vec3& theta);

  double scalar() const { return q_[0]; }
  Vec3 vec() const { return q_.tail<3>(); }
  const Vec4& coeffs() const { return q_; }

  Quaternion conjugate() const;
  // Sign representative with q_s >= 0.
  Quaternion canonical() const;
  // Logarithm map; the returned vector has norm <= pi.
  Vec3 rotation_vector() const;

 private:
  Vec4 q_;
};

Mat3 skew(const Vec3& v);

// Left-multiplication matrix: lmult(q2) * q1 == q2 (x) q1.
Mat4 lmult(const Vec4& q);
inline Mat4 lmult(const Quaternion& q) { return lmult(q.coeffs()); }

Vec4 hamilton_product(const Vec4& a, const Vec4& b);
Quaternion operator*(const Quaternion& a, const Quaternion& b);

// Rotation matrix equivalent of q. Non-unit coefficients are normalized.
Mat3 to_rotation(const Vec4& q);
inline Mat3 to_rotation(const Quaternion& q) { return to_rotation(q.coeffs()); }

// Angle of the relative rotation a^-1 (x) b, in [0, pi].
double angle_between(const Quaternion& a, const Quaternion& b);

// Body axis that carries the chaser capture vector D_c.
inline Vec3 capture_axis() { return Vec3::UnitZ(); }

// Attitude whose body +z axis points along -r (at the target at the origin),
// reached from q_prev by the minimum-angle rotation. An exactly antiparallel
// start is resolved by a half turn about q_prev's body +x axis.
// Throws DegenerateGeometry if ||r|| < 1e-9.
Quaternion pointing_attitude(const Vec3& r, const Quaternion& q_prev);

// Chaser attitude at capture: q_t_final composed with a -180 deg turn about y.
Quaternion terminal_attitude(const Quaternion& q_t_final);

}  // namespace softcap
