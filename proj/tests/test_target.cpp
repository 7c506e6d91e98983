#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "softcap/target.hpp"

using namespace softcap;

TEST_CASE("inertia validation") {
  CHECK_NOTHROW(InertiaMatrix::reference_target());
  Mat3 asym = Mat3::Identity();
  asym(0, 1) = 0.1;
  CHECK_THROWS_AS(InertiaMatrix{asym}, InvalidInput);
  CHECK_THROWS_AS(InertiaMatrix{Mat3(Vec3(1, -1, 1).asDiagonal())}, InvalidInput);
  // Principal moments 1, 1, 3 break the triangle inequality.
  CHECK_THROWS_AS(InertiaMatrix{Mat3(Vec3(1, 1, 3).asDiagonal())}, InvalidInput);
  CHECK_NOTHROW(InertiaMatrix{Mat3(Vec3(1, 1, 2).asDiagonal())});
}

TEST_CASE("torque-free propagation conserves energy and angular momentum") {
  const InertiaMatrix J = InertiaMatrix::reference_target();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const TargetState x0 = sample_random_tumble(rng, 10.0 * std::numbers::pi / 180.0);
    const TumbleTrajectory traj = propagate(x0, J, 300.0, 1.0);
    REQUIRE(traj.size() == 301);
    const double E0 = J.kinetic_energy(x0.omega);
    const double H0 = J.angular_momentum(x0.omega).norm();
    double dE = 0.0, dH = 0.0;
    for (const TargetState& x : traj.nodes()) {
      dE = std::max(dE, std::abs(J.kinetic_energy(x.omega) - E0) / E0);
      dH = std::max(dH, std::abs(J.angular_momentum(x.omega).norm() - H0) / H0);
      CHECK(std::abs(x.q.coeffs().norm() - 1.0) < 1e-14);
    }
    CHECK(dE <= 1e-6);
    CHECK(dH <= 1e-6);
  }
}

TEST_CASE("axisymmetric tumble matches the closed-form solution") {
  const double Ia = 4.0, It = 9.0;
  const InertiaMatrix J(Vec3(Ia, It, It).asDiagonal());
  const Vec3 w0(0.15, 0.05, -0.08);
  const Eigen::Quaterniond q0(Eigen::AngleAxisd(0.7, Vec3(1, 2, -1).normalized()));
  TargetState x0{Quaternion(q0.w(), q0.x(), q0.y(), q0.z()), w0};
  const TumbleTrajectory traj = propagate(x0, J, 200.0, 0.1);
  for (double t : {0.0, 13.3, 57.05, 120.0, 199.95, 200.0}) {
    const TargetState s = traj.sample(t);
    CHECK((s.omega - oracle::axisymmetric_rate(w0, Ia, It, t)).norm() < 1e-6);
    const Eigen::Quaterniond qe = oracle::axisymmetric_attitude(q0, w0, Ia, It, t);
    const Mat3 Re = qe.toRotationMatrix();
    CHECK((to_rotation(s.q) - Re).norm() < 1e-6);
  }
}

TEST_CASE("spline sampling is exact at nodes and smooth between them") {
  const InertiaMatrix J = InertiaMatrix::reference_target();
  const TargetState x0{Quaternion::from_axis_angle(Vec3(0, 1, 1), 0.3), Vec3(0.1, -0.05, 0.12)};
  const TumbleTrajectory traj = propagate(x0, J, 50.0, 1.0);
  for (std::size_t k = 0; k < traj.size(); k += 7) {
    const TargetState s = traj.sample(static_cast<double>(k));
    CHECK((s.q.coeffs() - traj.node(k).q.coeffs()).norm() == 0.0);
    CHECK((s.omega - traj.node(k).omega).norm() == 0.0);
  }
  // A fine reference propagation bounds the interpolation error.
  const TumbleTrajectory fine = propagate(x0, J, 50.0, 0.01);
  double worst = 0.0;
  for (double t = 0.0; t <= 50.0; t += 0.37) {
    const TargetState a = traj.sample(t);
    const TargetState b = fine.sample(t);
    worst = std::max(worst, angle_between(a.q, b.q));
    CHECK(std::abs(a.q.coeffs().norm() - 1.0) < 1e-14);
  }
  CHECK(worst < 1e-4);
  CHECK_THROWS_AS(traj.sample(50.5), std::out_of_range);
  CHECK_THROWS_AS(traj.sample(-0.1), std::out_of_range);
}

TEST_CASE("stored quaternion nodes keep a consistent sign") {
  const InertiaMatrix J = InertiaMatrix::reference_target();
  const TargetState x0{Quaternion(), Vec3(0.2, 0.0, 0.0)};
  const TumbleTrajectory traj = propagate(x0, J, 100.0, 1.0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    CHECK(traj.node(k).q.coeffs().dot(traj.node(k - 1).q.coeffs()) >= 0.0);
  }
}

TEST_CASE("inertial angular momentum stays fixed") {
  const InertiaMatrix J = InertiaMatrix::reference_target();
  const TargetState x0{Quaternion::from_axis_angle(Vec3(1, 0, 1), 1.0), Vec3(0.1, 0.12, -0.07)};
  const TumbleTrajectory traj = propagate(x0, J, 300.0, 1.0);
  const Vec3 H0 = to_rotation(x0.q) * J.angular_momentum(x0.omega);
  for (const TargetState& x : traj.nodes()) {
    CHECK((to_rotation(x.q) * J.angular_momentum(x.omega) - H0).norm() / H0.norm() < 1e-5);
  }
}

TEST_CASE("random tumble is reproducible and unbiased") {
  std::mt19937_64 a(23), b(23);
  const TargetState xa = sample_random_tumble(a, 0.1);
  const TargetState xb = sample_random_tumble(b, 0.1);
  CHECK(xa.q.coeffs() == xb.q.coeffs());
  CHECK(xa.omega == xb.omega);

  // Uniform rotations: every q_s q_i product has zero mean, variance 1/16.
  std::mt19937_64 rng(24);
  const int n = 10000;
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec4& q = sample_random_tumble(rng, 0.1).q.coeffs();
    sum += q[0] * q.tail<3>();
  }
  const double sigma = std::sqrt(1.0 / 16.0 / n);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(sum[j] / n) < 3.0 * sigma);
}

TEST_CASE("random tumble respects the rate cap") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 500; ++i) {
    const TargetState x = sample_random_tumble(rng, 0.1);
    CHECK(x.omega.norm() <= 0.1);
    CHECK(std::abs(x.q.coeffs().norm() - 1.0) < 1e-14);
  }
}

TEST_CASE("tumble history CSV has one row per node") {
  const TumbleTrajectory traj = propagate({Quaternion(), Vec3(0.01, 0.02, 0.03)}, InertiaMatrix::reference_target(), 5.0, 1.0);
  std::ostringstream out;
  traj.write_csv(out);
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 7);
  CHECK(s.rfind("t,q_s,q_x,q_y,q_z,w_x,w_y,w_z\n", 0) == 0);
}

TEST_CASE("propagation rejects nonpositive steps") {
  CHECK_THROWS_AS(propagate({}, InertiaMatrix::reference_target(), 10.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(propagate({}, InertiaMatrix::reference_target(), -1.0, 1.0), InvalidInput);
}
