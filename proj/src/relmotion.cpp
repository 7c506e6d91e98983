#include "softcap/relmotion.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace softcap {

OrbitContext OrbitContext::make(double semi_major_axis, double chaser_mass,
                                double mu) {
  if (!(semi_major_axis > 0.0) || !(mu > 0.0) || !(chaser_mass > 0.0)) {
    throw InvalidInput("orbit context needs positive a, mu and chaser mass");
  }
  OrbitContext ctx;
  ctx.semi_major_axis = semi_major_axis;
  ctx.mu = mu;
  ctx.chaser_mass = chaser_mass;
  ctx.mean_motion = std::sqrt(mu / (semi_major_axis * semi_major_axis * semi_major_axis));
  return ctx;
}

ContinuousDynamics cw_continuous(const OrbitContext& ctx) {
  const double n = ctx.mean_motion;
  ContinuousDynamics d;
  d.A.setZero();
  d.A.topRightCorner<3, 3>().setIdentity();
  d.A(3, 0) = 3.0 * n * n;
  d.A(3, 4) = 2.0 * n;
  d.A(4, 3) = -2.0 * n;
  d.A(5, 2) = -n * n;
  d.B.setZero();
  d.B.bottomRows<3>() = Mat3::Identity() / ctx.chaser_mass;
  return d;
}

DiscreteDynamics discretize(const Mat6& A, const Mat63& B, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("discretize: dt must be positive");
  Eigen::Matrix<double, 9, 9> M = Eigen::Matrix<double, 9, 9>::Zero();
  M.topLeftCorner<6, 6>() = A * dt;
  M.topRightCorner<6, 3>() = B * dt;
  const Eigen::Matrix<double, 9, 9> E = M.exp();
  DiscreteDynamics d;
  d.A_d = E.topLeftCorner<6, 6>();
  d.B_d = E.topRightCorner<6, 3>();
  d.dt = dt;
  return d;
}

ChaserState safe_orbit_state(double A0, double B0, double theta, double psi,
                             double n) {
  ChaserState s;
  s.r = Vec3(A0 * std::sin(theta), 2.0 * A0 * std::cos(theta), B0 * std::sin(psi));
  s.v = Vec3(A0 * n * std::cos(theta), -2.0 * n * A0 * std::sin(theta),
             B0 * n * std::cos(psi));
  return s;
}

SafeOrbitSample sample_safe_orbit(std::mt19937_64& rng, Range A0_range,
                                  Range B0_range, const OrbitContext& ctx) {
  if (!(A0_range.lo > 0.0) || A0_range.hi < A0_range.lo || !(B0_range.lo > 0.0) ||
      B0_range.hi < B0_range.lo) {
    throw InvalidInput("safe-orbit amplitude ranges must be positive and ordered");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SafeOrbitSample out;
  out.A0 = A0_range.lo + (A0_range.hi - A0_range.lo) * unit(rng);
  out.B0 = B0_range.lo + (B0_range.hi - B0_range.lo) * unit(rng);
  out.theta = 2.0 * std::numbers::pi * unit(rng);
  out.psi = 2.0 * std::numbers::pi * unit(rng);
  out.state = safe_orbit_state(out.A0, out.B0, out.theta, out.psi, ctx.mean_motion);
  return out;
}

Eigen::Vector2d safe_orbit_residuals(const ChaserState& s, double n) {
  return {s.v.y() + 2.0 * n * s.r.x(), s.r.y() - 2.0 * s.v.x() / n};
}

Eigen::Vector2d safe_orbit_amplitudes(const ChaserState& s, double n) {
  return {std::hypot(s.v.x() / n, s.r.x()), std::hypot(s.v.z() / n, s.r.z())};
}

}  // namespace softcap
