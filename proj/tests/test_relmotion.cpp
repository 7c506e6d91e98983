#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "softcap/relmotion.hpp"

using namespace softcap;

namespace {

Vec6 rk4(const ContinuousDynamics& c, Vec6 x, const Vec3& u, double T, int steps) {
  const double h = T / steps;
  auto f = [&](const Vec6& y) -> Vec6 { return c.A * y + c.B * u; };
  for (int i = 0; i < steps; ++i) {
    const Vec6 k1 = f(x);
    const Vec6 k2 = f(x + 0.5 * h * k1);
    const Vec6 k3 = f(x + 0.5 * h * k2);
    const Vec6 k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

}  // namespace

TEST_CASE("mean motion of the reference orbit") {
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  CHECK(ctx.mean_motion == doctest::Approx(std::sqrt(kEarthMu / std::pow(7.738e6, 3))).epsilon(1e-15));
  CHECK(ctx.mean_motion == doctest::Approx(9.2754e-4).epsilon(1e-4));
}

TEST_CASE("continuous model has the Hill structure") {
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  const ContinuousDynamics c = cw_continuous(ctx);
  const double n = ctx.mean_motion;
  CHECK(c.A(3, 0) == doctest::Approx(3 * n * n));
  CHECK(c.A(3, 4) == doctest::Approx(2 * n));
  CHECK(c.A(4, 3) == doctest::Approx(-2 * n));
  CHECK(c.A(5, 2) == doctest::Approx(-n * n));
  CHECK((c.A.topRightCorner<3, 3>() - Mat3::Identity()).norm() == 0.0);
  CHECK((c.B.bottomRows<3>() - Mat3::Identity() / 1500.0).norm() == 0.0);
  CHECK(c.B.topRows<3>().norm() == 0.0);
}

TEST_CASE("unforced discrete transition equals the analytic CW solution") {
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  const ContinuousDynamics c = cw_continuous(ctx);
  for (double dt : {0.5, 1.0, 10.0, 600.0}) {
    const DiscreteDynamics d = discretize(c.A, c.B, dt);
    CHECK((d.A_d - oracle::cw_stm(ctx.mean_motion, dt)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("zero-order hold matches fine integration under constant thrust") {
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  const ContinuousDynamics c = cw_continuous(ctx);
  const DiscreteDynamics d = discretize(c.A, c.B, 1.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vec6 x;
    for (int j = 0; j < 6; ++j) x[j] = (j < 3 ? 30.0 : 1.5) * U(rng);
    const Vec3 u = 100.0 * Vec3(U(rng), U(rng), U(rng));
    worst = std::max(worst, (d.step(x, u) - rk4(c, x, u, 1.0, 200)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("safe ellipse is drift free and periodic") {
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  const double n = ctx.mean_motion;
  const ContinuousDynamics c = cw_continuous(ctx);
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    const SafeOrbitSample s = sample_safe_orbit(rng, {15.0, 25.0}, {10.0, 25.0}, ctx);
    CHECK(s.A0 >= 15.0);
    CHECK(s.A0 <= 25.0);
    CHECK(s.B0 >= 10.0);
    CHECK(s.B0 <= 25.0);
    CHECK(safe_orbit_residuals(s.state, n).norm() < 1e-12);
    const Eigen::Vector2d amp = safe_orbit_amplitudes(s.state, n);
    CHECK(amp[0] == doctest::Approx(s.A0).epsilon(1e-12));
    CHECK(amp[1] == doctest::Approx(s.B0).epsilon(1e-12));

    const double period = 2.0 * std::numbers::pi / n;
    const Vec6 x0 = s.state.stacked();
    const Vec6 xT = oracle::cw_stm(n, period) * x0;
    CHECK((xT - x0).norm() <= 1e-6);
    CHECK((discretize(c.A, c.B, period).A_d * x0 - x0).norm() <= 1e-6);

    // Stepping one period at dt = 1 s stays on the ellipse.
    const DiscreteDynamics d = discretize(c.A, c.B, 1.0);
    Vec6 x = x0;
    const int steps = static_cast<int>(period);
    for (int k = 0; k < steps; ++k) x = d.step(x, Vec3::Zero());
    CHECK(safe_orbit_residuals(ChaserState::from_stacked(x), n).norm() < 1e-8);
    CHECK((oracle::cw_stm(n, steps) * x0 - x).norm() < 1e-8);
  }
}

TEST_CASE("safe orbit sampling rejects bad ranges") {
  std::mt19937_64 rng(33);
  const OrbitContext ctx = OrbitContext::make(7.738e6, 1500.0);
  CHECK_THROWS_AS(sample_safe_orbit(rng, {0.0, 25.0}, {10.0, 25.0}, ctx), InvalidInput);
  CHECK_THROWS_AS(sample_safe_orbit(rng, {15.0, 10.0}, {10.0, 25.0}, ctx), InvalidInput);
}
