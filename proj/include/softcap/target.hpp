#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "softcap/quat.hpp"

namespace softcap {

// Target attitude state. q maps {T} coordinates to {O}; omega is the body
// angular velocity expressed in {T}, rad/s.
struct TargetState {
  Quaternion q;
  Vec3 omega = Vec3::Zero();
};

class InertiaMatrix {
 public:
  // Throws InvalidInput unless J is symmetric (1e-12), positive definite and
  // its principal moments satisfy the triangle inequalities.
  explicit InertiaMatrix(const Mat3& J);

  // Inertia of the reference tumbling target, kg m^2.
  static InertiaMatrix reference_target();

  const Mat3& matrix() const { return J_; }
  const Mat3& inverse() const { return J_inv_; }

  double kinetic_energy(const Vec3& omega) const {
    return 0.5 * omega.dot(J_ * omega);
  }
  Vec3 angular_momentum(const Vec3& omega) const { return J_ * omega; }

 private:
  Mat3 J_;
  Mat3 J_inv_;
};

struct TargetDerivative {
  Vec4 q_dot = Vec4::Zero();
  Vec3 omega_dot = Vec3::Zero();
};

// Torque-free rigid body: q_dot = 1/2 L(q) [0; w], w_dot = J^-1 (-w x J w).
TargetDerivative tumble_derivative(const Vec4& q, const Vec3& omega,
                                   const InertiaMatrix& J);
inline TargetDerivative tumble_derivative(const TargetState& x,
                                          const InertiaMatrix& J) {
  return tumble_derivative(x.q.coeffs(), x.omega, J);
}

// Uniformly spaced tumble history with C2 cubic-spline access.
//
// Quaternion components and angular-velocity components are splined
// independently (clamped at both ends by the supplied end rates), and
// interpolated quaternions are renormalized. Node signs are flipped where
// needed so consecutive quaternions have nonnegative dot product.
class TumbleTrajectory {
 public:
  using Rate = Eigen::Matrix<double, 7, 1>;  // [q_dot; omega_dot]

  TumbleTrajectory(double timestep, std::vector<TargetState> nodes,
                   const Rate& start_rate, const Rate& end_rate);

  double timestep() const { return dt_; }
  double horizon() const { return dt_ * static_cast<double>(nodes_.size() - 1); }
  std::size_t size() const { return nodes_.size(); }
  const TargetState& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<TargetState>& nodes() const { return nodes_; }

  // Throws std::out_of_range outside [0, horizon].
  TargetState sample(double t) const;

  // Node history as CSV: t,q_s,q_x,q_y,q_z,w_x,w_y,w_z.
  void write_csv(std::ostream& out) const;

 private:
  double dt_;
  std::vector<TargetState> nodes_;
  // Spline second derivatives, one row per node, 7 columns.
  Eigen::Matrix<double, Eigen::Dynamic, 7> values_;
  Eigen::Matrix<double, Eigen::Dynamic, 7> second_;
};

// Classical RK4 at step dt with quaternion renormalization after every step.
// Node count is floor(horizon/dt) + 1.
TumbleTrajectory propagate(const TargetState& x0, const InertiaMatrix& J,
                           double horizon, double dt);

// Attitude uniform on SO(3); omega direction uniform on the sphere with
// magnitude uniform on [0, rate_max].
TargetState sample_random_tumble(std::mt19937_64& rng, double rate_max);

}  // namespace softcap
