#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Rodrigues' formula for a unit axis.
inline Mat3 rodrigues(const Vec3& axis, double angle) {
  const Vec3 k = axis.normalized();
  Mat3 K;
  K << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Mat3::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
}

// Scale factor at which two oriented boxes, both scaled about their
// centers, first touch. Separating-axis theorem over the 15 candidate axes.
inline double box_alpha(const Vec3& h1, const Mat3& R1, const Vec3& p1, const Vec3& h2,
                        const Mat3& R2, const Vec3& p2) {
  const Vec3 d = p2 - p1;
  double best = 0.0;
  auto axis = [&](Vec3 L) {
    const double n = L.norm();
    if (n < 1e-9) return;
    L /= n;
    double r = 0.0;
    for (int i = 0; i < 3; ++i) {
      r += h1[i] * std::abs(L.dot(R1.col(i))) + h2[i] * std::abs(L.dot(R2.col(i)));
    }
    best = std::max(best, std::abs(L.dot(d)) / r);
  };
  for (int i = 0; i < 3; ++i) {
    axis(R1.col(i));
    axis(R2.col(i));
    for (int j = 0; j < 3; ++j) axis(R1.col(i).cross(R2.col(j)));
  }
  return best;
}

// Unforced Clohessy-Wiltshire state transition matrix, state [x y z xd yd zd].
inline Eigen::Matrix<double, 6, 6> cw_stm(double n, double t) {
  const double s = std::sin(n * t), c = std::cos(n * t);
  Eigen::Matrix<double, 6, 6> P;
  P << 4 - 3 * c, 0, 0, s / n, 2 * (1 - c) / n, 0,
      6 * (s - n * t), 1, 0, -2 * (1 - c) / n, (4 * s - 3 * n * t) / n, 0,
      0, 0, c, 0, 0, s / n,
      3 * n * s, 0, 0, c, 2 * s, 0,
      -6 * n * (1 - c), 0, 0, -2 * s, 4 * c - 3, 0,
      0, 0, -n * s, 0, 0, c;
  return P;
}

// Body rate of a torque-free axisymmetric body, symmetry axis x:
// the transverse rate precesses at lambda = (Ia - It) w_x / It.
inline Vec3 axisymmetric_rate(const Vec3& w0, double Ia, double It, double t) {
  const double lam = (Ia - It) * w0.x() / It;
  const double c = std::cos(lam * t), s = std::sin(lam * t);
  return Vec3(w0.x(), c * w0.y() - s * w0.z(), s * w0.y() + c * w0.z());
}

// Matching attitude, q0 (x) exp(Omega t) (x) exp(-lambda t e_x) with
// Omega = w0 + lambda e_x. Eigen quaternions are Hamilton, scalar w().
inline Eigen::Quaterniond axisymmetric_attitude(const Eigen::Quaterniond& q0, const Vec3& w0, double Ia,
                                                double It, double t) {
  const double lam = (Ia - It) * w0.x() / It;
  const Vec3 Om = w0 + lam * Vec3::UnitX();
  const Eigen::Quaterniond a(Eigen::AngleAxisd(Om.norm() * t, Om.normalized()));
  const Eigen::Quaterniond b(Eigen::AngleAxisd(-lam * t, Vec3::UnitX()));
  return q0 * a * b;
}

}  // namespace oracle
