#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "softcap/quat.hpp"

using namespace softcap;

namespace {

Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Quaternion(Vec4(g(rng), g(rng), g(rng), g(rng)));
}

Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return Vec3(g(rng), g(rng), g(rng));
}

}  // namespace

TEST_CASE("rotation matrix matches Rodrigues for axis-angle quaternions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const Vec3 axis = random_vec(rng).normalized();
    const double a = ang(rng);
    const Mat3 R = to_rotation(Quaternion::from_axis_angle(axis, a));
    CHECK((R - oracle::rodrigues(axis, a)).norm() < 1e-13);
  }
}

TEST_CASE("rotation of a Hamilton product is the product of rotations") {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Quaternion a = random_unit(rng);
    const Quaternion b = random_unit(rng);
    worst = std::max(worst, (to_rotation(a * b) - to_rotation(a) * to_rotation(b)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("left-multiplication matrix reproduces the product") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const Quaternion a = random_unit(rng);
    const Quaternion b = random_unit(rng);
    CHECK((lmult(a) * b.coeffs() - hamilton_product(a.coeffs(), b.coeffs())).norm() < 1e-15);
    CHECK(((a * a.conjugate()).coeffs() - Vec4(1, 0, 0, 0)).norm() < 1e-15);
  }
}

TEST_CASE("rotation matrices are orthonormal with determinant one") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const Mat3 R = to_rotation(random_unit(rng));
    CHECK((R.transpose() * R - Mat3::Identity()).norm() < 1e-14);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("rotation vector round trip") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    Vec3 th = random_vec(rng);
    if (th.norm() > 3.0) th *= 3.0 / th.norm();
    CHECK((Quaternion::from_rotation_vector(th).rotation_vector() - th).norm() < 1e-12);
  }
  CHECK(Quaternion::from_rotation_vector(Vec3::Zero()).rotation_vector().norm() == 0.0);
}

TEST_CASE("canonical form has nonnegative scalar and the same rotation") {
  const Quaternion q(-0.5, 0.5, -0.5, 0.5);
  CHECK(q.canonical().scalar() >= 0.0);
  CHECK((to_rotation(q) - to_rotation(q.canonical())).norm() < 1e-15);
}

TEST_CASE("pointing attitude aims body z at the target by a minimum rotation") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 300; ++i) {
    const Quaternion prev = random_unit(rng);
    const Vec3 r = random_vec(rng, 20.0);
    const Quaternion q = pointing_attitude(r, prev);
    const Vec3 z = to_rotation(q) * Vec3::UnitZ();
    CHECK((z + r.normalized()).norm() < 1e-12);
    // The smallest rotation taking one axis onto another turns by the angle between them.
    const Vec3 z_prev = to_rotation(prev) * Vec3::UnitZ();
    const double expected = std::acos(std::clamp(z_prev.dot(-r.normalized()), -1.0, 1.0));
    CHECK(angle_between(prev, q) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(q.scalar() >= 0.0);
  }
}

TEST_CASE("pointing attitude is idempotent once aligned") {
  const Vec3 r(3.0, -4.0, 12.0);
  const Quaternion q1 = pointing_attitude(r, Quaternion::identity());
  const Quaternion q2 = pointing_attitude(r, q1);
  CHECK(angle_between(q1, q2) < 1e-12);
}

TEST_CASE("antiparallel pointing turns half a revolution about body x") {
  // Identity already points +z; the target sits on +z so the body must flip.
  const Quaternion q = pointing_attitude(Vec3(0, 0, -5), Quaternion::identity());
  CHECK(angle_between(Quaternion::identity(), q) < 1e-12);
  const Quaternion flip = pointing_attitude(Vec3(0, 0, 5), Quaternion::identity());
  const Mat3 R = to_rotation(flip);
  CHECK((R * Vec3::UnitZ() - Vec3(0, 0, -1)).norm() < 1e-12);
  CHECK((R * Vec3::UnitX() - Vec3::UnitX()).norm() < 1e-12);
}

TEST_CASE("pointing at the origin is rejected") {
  CHECK_THROWS_AS(pointing_attitude(Vec3(0, 0, 1e-12), Quaternion::identity()), DegenerateGeometry);
}

TEST_CASE("capture attitude faces the target capture axis") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const Quaternion qt = random_unit(rng);
    const Quaternion qc = terminal_attitude(qt);
    const Mat3 Rt = to_rotation(qt);
    const Mat3 Rc = to_rotation(qc);
    CHECK((Rc * Vec3::UnitZ() + Rt * Vec3::UnitZ()).norm() < 1e-12);
    CHECK((Rc * Vec3::UnitY() - Rt * Vec3::UnitY()).norm() < 1e-12);
  }
}
