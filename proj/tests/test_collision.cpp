#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "softcap/collision.hpp"

using namespace softcap;

namespace {

Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Quaternion(Vec4(g(rng), g(rng), g(rng), g(rng)));
}

double oracle_alpha(const Vec3& h1, const Pose& a, const Vec3& h2, const Pose& b) {
  return oracle::box_alpha(h1, to_rotation(a.attitude), a.position, h2, to_rotation(b.attitude), b.position);
}

const Vec3 kChaserHalf(1.0, 1.0, 1.5);
const Vec3 kTargetHalf(1.0, 1.0, 1.0);

}  // namespace

TEST_CASE("analytic cube separations") {
  const ConvexPolytope cube = ConvexPolytope::box(Vec3::Ones());
  const ConvexPolytope tall = ConvexPolytope::box(kChaserHalf);
  for (double d : {0.5, 2.0, 3.7, 10.0}) {
    CHECK(alpha(cube, {Vec3(d, 0, 0), {}}, cube, {Vec3::Zero(), {}}).alpha == doctest::Approx(d / 2).epsilon(1e-6));
    CHECK(alpha(tall, {Vec3(0, 0, d), {}}, cube, {Vec3::Zero(), {}}).alpha == doctest::Approx(d / 2.5).epsilon(1e-6));
    const Quaternion yaw45 = Quaternion::from_axis_angle(Vec3::UnitZ(), std::numbers::pi / 4);
    CHECK(alpha(cube, {Vec3(d, 0, 0), yaw45}, cube, {Vec3::Zero(), {}}).alpha ==
          doctest::Approx(d / (1 + std::sqrt(2.0))).epsilon(1e-6));
    // Corner on: all three axes contribute.
    const Vec3 diag = Vec3::Ones().normalized();
    CHECK(alpha(cube, {d * diag, {}}, cube, {Vec3::Zero(), {}}).alpha ==
          doctest::Approx(d / std::sqrt(3.0) / 2).epsilon(1e-6));
  }
}

TEST_CASE("alpha matches the separating-axis oracle on random poses") {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g(0.0, 3.0);
  const ConvexPolytope c = ConvexPolytope::box(kChaserHalf);
  const ConvexPolytope t = ConvexPolytope::box(kTargetHalf);
  for (int i = 0; i < 300; ++i) {
    const Pose a{Vec3(g(rng), g(rng), g(rng)), random_unit(rng)};
    const Pose b{Vec3(g(rng), g(rng), g(rng)) * 0.2, random_unit(rng)};
    const AlphaResult r = alpha(c, a, t, b);
    CHECK(r.alpha == doctest::Approx(oracle_alpha(kChaserHalf, a, kTargetHalf, b)).epsilon(1e-9));
    // The witness point lies in both inflated hulls.
    const Vec3 y1 = to_rotation(a.attitude).transpose() * (r.witness - a.position);
    const Vec3 y2 = to_rotation(b.attitude).transpose() * (r.witness - b.position);
    CHECK(((c.A * y1 - r.alpha * c.b).array() <= 1e-9).all());
    CHECK(((t.A * y2 - r.alpha * t.b).array() <= 1e-9).all());
  }
}

TEST_CASE("overlapping bodies have alpha below one") {
  const ConvexPolytope cube = ConvexPolytope::box(Vec3::Ones());
  CHECK(alpha(cube, {Vec3(1.0, 0.3, 0.0), {}}, cube, {Vec3::Zero(), {}}).alpha < 1.0);
  CHECK(alpha(cube, {Vec3::Zero(), {}}, cube, {Vec3::Zero(), {}}).alpha == doctest::Approx(0.0));
}

TEST_CASE("alpha gradient agrees with finite differences of the oracle") {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> g(0.0, 4.0);
  const ConvexPolytope c = ConvexPolytope::box(kChaserHalf);
  const ConvexPolytope t = ConvexPolytope::box(kTargetHalf);
  const double h = 1e-6;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Pose a{Vec3(g(rng), g(rng), g(rng)), random_unit(rng)};
    Pose b{Vec3::Zero(), random_unit(rng)};
    if (a.position.norm() < 3.0) continue;
    const AlphaGradient G = alpha_gradient(c, a, t, b);
    Vec3 fd_p, fd_q;
    for (int j = 0; j < 3; ++j) {
      Pose ap = a, am = a;
      ap.position[j] += h;
      am.position[j] -= h;
      fd_p[j] = (oracle_alpha(kChaserHalf, ap, kTargetHalf, b) - oracle_alpha(kChaserHalf, am, kTargetHalf, b)) / (2 * h);
      Pose aq = a, an = a;
      aq.attitude = a.attitude * Quaternion::from_rotation_vector(h * Vec3::Unit(j));
      an.attitude = a.attitude * Quaternion::from_rotation_vector(-h * Vec3::Unit(j));
      fd_q[j] = (oracle_alpha(kChaserHalf, aq, kTargetHalf, b) - oracle_alpha(kChaserHalf, an, kTargetHalf, b)) / (2 * h);
    }
    CHECK((G.d_position1 - fd_p).norm() <= 1e-4);
    CHECK((G.d_attitude1 - fd_q).norm() <= 1e-4);
    CHECK((G.d_position2 + G.d_position1).norm() <= 1e-9);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("face-to-face contact is degenerate and falls back to differences") {
  const ConvexPolytope cube = ConvexPolytope::box(Vec3::Ones());
  const Pose a{Vec3(3.0, 0.0, 0.0), {}};
  const Pose b{Vec3::Zero(), {}};
  const AlphaResult r = alpha(cube, a, cube, b);
  CHECK(r.degenerate);
  const AlphaGradient G = alpha_gradient(cube, a, cube, b);
  CHECK(G.finite_difference);
  CHECK((G.d_position1 - Vec3(0.5, 0.0, 0.0)).norm() < 1e-6);
}

TEST_CASE("composed jacobian includes the pointing chain") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> g(0.0, 5.0);
  const CollisionGeometry geom;
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Vec3 r(g(rng), g(rng), g(rng));
    if (r.norm() < 4.0) continue;
    const Quaternion prev = random_unit(rng);
    const Quaternion qt = random_unit(rng);
    const ComposedAlpha ca = composed_alpha_and_gradient(r, prev, qt, geom);
    auto f = [&](const Vec3& p) {
      return oracle_alpha(kChaserHalf, {p, pointing_attitude(p, prev)}, kTargetHalf, {Vec3::Zero(), qt});
    };
    CHECK(ca.alpha == doctest::Approx(f(r)).epsilon(1e-9));
    Vec3 fd;
    for (int j = 0; j < 3; ++j) fd[j] = (f(r + h * Vec3::Unit(j)) - f(r - h * Vec3::Unit(j))) / (2 * h);
    CHECK((ca.jacobian - fd).norm() <= 1e-4);
  }
}

TEST_CASE("polytope validation") {
  ConvexPolytope p = ConvexPolytope::box(Vec3::Ones());
  CHECK_NOTHROW(p.validate());
  ConvexPolytope open = p;
  open.A.conservativeResize(5, 3);
  open.b.conservativeResize(5);
  CHECK_THROWS_AS(open.validate(), InvalidInput);
  ConvexPolytope scaled = p;
  scaled.A.row(0) *= 2.0;
  CHECK_THROWS_AS(scaled.validate(), InvalidInput);
  ConvexPolytope off = p;
  off.b[2] = 0.0;
  CHECK_THROWS_AS(off.validate(), InvalidInput);
  CHECK_THROWS_AS(ConvexPolytope::box(Vec3(1, 0, 1)), InvalidInput);
}
