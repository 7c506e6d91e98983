#pragma once

// Minimum-inflation collision metric between two posed convex polytopes.
//
// Both hulls are scaled about their own centers by a common factor alpha;
// alpha is the smallest factor at which they touch. alpha < 1 means the
// uninflated hulls intersect.

#include <vector>

#include "softcap/quat.hpp"
#include "softcap/target.hpp"

namespace softcap {

// {y : A y <= b} in body coordinates, centered on the body origin.
struct ConvexPolytope {
  Eigen::Matrix<double, Eigen::Dynamic, 3> A;  // outward unit normals
  Eigen::VectorXd b;                           // offsets, m, all > 0

  static ConvexPolytope box(const Vec3& half_extents);

  // Throws InvalidInput on non-unit normals, b <= 0 or an unbounded set.
  void validate() const;
  Eigen::Index faces() const { return A.rows(); }
};

struct Pose {
  Vec3 position = Vec3::Zero();  // m, in {O}
  Quaternion attitude;           // body -> {O}
};

struct AlphaResult {
  double alpha = 0.0;
  Vec3 witness = Vec3::Zero();       // point shared by both inflated hulls
  Vec3 grad_r = Vec3::Zero();        // d alpha / d pose1.position, 1/m
  std::vector<int> active_set;       // tight faces; body 2 indices offset by faces(p1)
  Eigen::VectorXd multipliers;       // LP multipliers, body 1 faces first
  bool degenerate = false;           // more tight faces than LP dimensions
};

// Throws std::runtime_error carrying the problem data if the LP fails.
AlphaResult alpha(const ConvexPolytope& p1, const Pose& pose1,
                  const ConvexPolytope& p2, const Pose& pose2);

struct AlphaGradient {
  Vec3 d_position1 = Vec3::Zero();
  Vec3 d_position2 = Vec3::Zero();
  // Sensitivities to small body-frame rotations q <- q (x) exp(dtheta / 2).
  Vec3 d_attitude1 = Vec3::Zero();
  Vec3 d_attitude2 = Vec3::Zero();
  bool finite_difference = false;
};

inline constexpr double kAlphaFiniteDifferenceStep = 1e-5;  // m and rad

// LP-sensitivity gradient; central differences when the active set is
// degenerate.
AlphaGradient alpha_gradient(const ConvexPolytope& p1, const Pose& pose1,
                             const ConvexPolytope& p2, const Pose& pose2);

struct CollisionGeometry {
  ConvexPolytope chaser = ConvexPolytope::box(Vec3(1.0, 1.0, 1.5));
  ConvexPolytope target = ConvexPolytope::box(Vec3(1.0, 1.0, 1.0));
};

struct ComposedAlpha {
  double alpha = 0.0;
  Vec3 jacobian = Vec3::Zero();  // total d alpha / d r including the attitude chain
  Quaternion chaser_attitude;
  bool finite_difference = false;
};

// alpha with the chaser at (r, pointing_attitude(r, q_prev)) and the target
// at the origin with attitude q_target.
ComposedAlpha composed_alpha_and_gradient(const Vec3& r, const Quaternion& q_prev,
                                          const Quaternion& q_target,
                                          const CollisionGeometry& geometry);

ComposedAlpha composed_alpha_and_gradient(const Vec3& r, double t,
                                          const TumbleTrajectory& traj,
                                          const CollisionGeometry& geometry,
                                          const Quaternion& q_prev);

}  // namespace softcap
