#include "softcap/collision.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "softcap/lp.hpp"

namespace softcap {

ConvexPolytope ConvexPolytope::box(const Vec3& half_extents) {
  ConvexPolytope p;
  p.A.resize(6, 3);
  p.b.resize(6);
  for (int i = 0; i < 3; ++i) {
    p.A.row(2 * i) = Vec3::Unit(i).transpose();
    p.A.row(2 * i + 1) = -Vec3::Unit(i).transpose();
    p.b[2 * i] = half_extents[i];
    p.b[2 * i + 1] = half_extents[i];
  }
  p.validate();
  return p;
}

void ConvexPolytope::validate() const {
  if (A.rows() == 0 || A.rows() != b.size()) {
    throw InvalidInput("polytope: A and b must have matching, nonzero row counts");
  }
  if (!A.allFinite() || !b.allFinite()) throw InvalidInput("polytope: non-finite data");
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (std::abs(A.row(i).norm() - 1.0) > 1e-9) {
      throw InvalidInput("polytope: face normal " + std::to_string(i) + " is not unit length");
    }
    if (!(b[i] > 0.0)) {
      throw InvalidInput("polytope: offset " + std::to_string(i) +
                         " must be positive (origin strictly inside)");
    }
  }
  const Eigen::MatrixXd G = A;
  const Eigen::VectorXd h = b;
  for (int i = 0; i < 3; ++i) {
    for (double s : {1.0, -1.0}) {
      const auto res = lp::solve_inequality_lp(G, h, -s * Eigen::VectorXd::Unit(3, i));
      if (res.status != lp::LpStatus::optimal) {
        throw InvalidInput("polytope: half-spaces do not bound a finite region");
      }
    }
  }
}

namespace {

struct AlphaLp {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  // Face normals in {O}, stacked body 1 then body 2.
  Eigen::Matrix<double, Eigen::Dynamic, 3> normals;
};

// Rows: n_j' y - b_j alpha <= n_j' r_i with n_j = R_i a_j.
AlphaLp assemble(const ConvexPolytope& p1, const Pose& pose1,
                 const ConvexPolytope& p2, const Pose& pose2) {
  const Eigen::Index m1 = p1.faces();
  const Eigen::Index m2 = p2.faces();
  AlphaLp lp;
  lp.G.resize(m1 + m2, 4);
  lp.h.resize(m1 + m2);
  lp.normals.resize(m1 + m2, 3);
  auto fill = [&](const ConvexPolytope& p, const Pose& pose, Eigen::Index offset) {
    const Mat3 R = to_rotation(pose.attitude);
    for (Eigen::Index j = 0; j < p.faces(); ++j) {
      const Vec3 n = R * p.A.row(j).transpose();
      lp.normals.row(offset + j) = n.transpose();
      lp.G.block<1, 3>(offset + j, 0) = n.transpose();
      lp.G(offset + j, 3) = -p.b[j];
      lp.h[offset + j] = n.dot(pose.position);
    }
  };
  fill(p1, pose1, 0);
  fill(p2, pose2, m1);
  return lp;
}

std::string describe(const Pose& pose1, const Pose& pose2) {
  std::ostringstream os;
  os.precision(17);
  os << "pose1 r=[" << pose1.position.transpose() << "] q=["
     << pose1.attitude.coeffs().transpose() << "] pose2 r=["
     << pose2.position.transpose() << "] q=[" << pose2.attitude.coeffs().transpose()
     << "]";
  return os.str();
}

double alpha_value(const ConvexPolytope& p1, const Pose& pose1,
                   const ConvexPolytope& p2, const Pose& pose2) {
  return alpha(p1, pose1, p2, pose2).alpha;
}

Pose rotated(const Pose& pose, const Vec3& dtheta) {
  return Pose{pose.position, pose.attitude * Quaternion::from_rotation_vector(dtheta)};
}

}  // namespace

AlphaResult alpha(const ConvexPolytope& p1, const Pose& pose1,
                  const ConvexPolytope& p2, const Pose& pose2) {
  const AlphaLp lp = assemble(p1, pose1, p2, pose2);
  const auto res = lp::solve_inequality_lp(lp.G, lp.h, Eigen::Vector4d::UnitW());
  if (res.status != lp::LpStatus::optimal) {
    throw std::runtime_error(std::string("alpha LP failed (") + lp::to_string(res.status) +
                             "): " + describe(pose1, pose2));
  }
  AlphaResult out;
  out.alpha = res.x[3];
  out.witness = res.x.head<3>();
  out.active_set = res.tight;
  out.multipliers = res.lambda;
  out.degenerate = res.tight.size() > 4;
  const Eigen::Index m1 = p1.faces();
  Vec3 g = Vec3::Zero();
  for (Eigen::Index j = 0; j < m1; ++j) {
    g -= res.lambda[j] * lp.normals.row(j).transpose();
  }
  out.grad_r = g;
  return out;
}

AlphaGradient alpha_gradient(const ConvexPolytope& p1, const Pose& pose1,
                             const ConvexPolytope& p2, const Pose& pose2) {
  const AlphaResult base = alpha(p1, pose1, p2, pose2);
  AlphaGradient g;
  if (!base.degenerate) {
    const Eigen::Index m1 = p1.faces();
    const Mat3 R1 = to_rotation(pose1.attitude);
    const Mat3 R2 = to_rotation(pose2.attitude);
    const Vec3 w1 = R1.transpose() * (base.witness - pose1.position);
    const Vec3 w2 = R2.transpose() * (base.witness - pose2.position);
    for (Eigen::Index j = 0; j < base.multipliers.size(); ++j) {
      const double lam = base.multipliers[j];
      if (lam == 0.0) continue;
      if (j < m1) {
        const Vec3 a = p1.A.row(j).transpose();
        g.d_position1 -= lam * (R1 * a);
        g.d_attitude1 += lam * a.cross(w1);
      } else {
        const Vec3 a = p2.A.row(j - m1).transpose();
        g.d_position2 -= lam * (R2 * a);
        g.d_attitude2 += lam * a.cross(w2);
      }
    }
    return g;
  }

  const double h = kAlphaFiniteDifferenceStep;
  g.finite_difference = true;
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = h * Vec3::Unit(i);
    g.d_position1[i] = (alpha_value(p1, {pose1.position + e, pose1.attitude}, p2, pose2) -
                        alpha_value(p1, {pose1.position - e, pose1.attitude}, p2, pose2)) /
                       (2.0 * h);
    g.d_position2[i] = (alpha_value(p1, pose1, p2, {pose2.position + e, pose2.attitude}) -
                        alpha_value(p1, pose1, p2, {pose2.position - e, pose2.attitude})) /
                       (2.0 * h);
    g.d_attitude1[i] = (alpha_value(p1, rotated(pose1, e), p2, pose2) -
                        alpha_value(p1, rotated(pose1, -e), p2, pose2)) /
                       (2.0 * h);
    g.d_attitude2[i] = (alpha_value(p1, pose1, p2, rotated(pose2, e)) -
                        alpha_value(p1, pose1, p2, rotated(pose2, -e))) /
                       (2.0 * h);
  }
  return g;
}

ComposedAlpha composed_alpha_and_gradient(const Vec3& r, const Quaternion& q_prev,
                                          const Quaternion& q_target,
                                          const CollisionGeometry& geometry) {
  const Pose target_pose{Vec3::Zero(), q_target};
  const Quaternion q = pointing_attitude(r, q_prev);
  const Pose chaser_pose{r, q};
  const AlphaResult base = alpha(geometry.chaser, chaser_pose, geometry.target, target_pose);

  ComposedAlpha out;
  out.alpha = base.alpha;
  out.chaser_attitude = q;
  const double h = kAlphaFiniteDifferenceStep;

  if (base.degenerate) {
    out.finite_difference = true;
    for (int i = 0; i < 3; ++i) {
      const Vec3 e = h * Vec3::Unit(i);
      const Pose plus{r + e, pointing_attitude(r + e, q_prev)};
      const Pose minus{r - e, pointing_attitude(r - e, q_prev)};
      out.jacobian[i] = (alpha_value(geometry.chaser, plus, geometry.target, target_pose) -
                         alpha_value(geometry.chaser, minus, geometry.target, target_pose)) /
                        (2.0 * h);
    }
    return out;
  }

  const AlphaGradient g = alpha_gradient(geometry.chaser, chaser_pose, geometry.target, target_pose);
  const Quaternion q_inv = q.conjugate();
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = h * Vec3::Unit(i);
    const Vec3 up = (q_inv * pointing_attitude(r + e, q_prev)).rotation_vector();
    const Vec3 down = (q_inv * pointing_attitude(r - e, q_prev)).rotation_vector();
    const Vec3 dtheta = (up - down) / (2.0 * h);
    out.jacobian[i] = g.d_position1[i] + g.d_attitude1.dot(dtheta);
  }
  return out;
}

ComposedAlpha composed_alpha_and_gradient(const Vec3& r, double t,
                                          const TumbleTrajectory& traj,
                                          const CollisionGeometry& geometry,
                                          const Quaternion& q_prev) {
  return composed_alpha_and_gradient(r, q_prev, traj.sample(t).q, geometry);
}

}  // namespace softcap
