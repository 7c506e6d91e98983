#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "softcap/lp.hpp"

using namespace softcap::lp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Best objective over all feasible vertices of a bounded 3-variable LP.
double vertex_enumeration(const MatrixXd& G, const VectorXd& h, const VectorXd& c) {
  double best = std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(G.rows());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Eigen::Matrix3d A;
        A << G.row(i), G.row(j), G.row(k);
        if (std::abs(A.determinant()) < 1e-10) continue;
        const Eigen::Vector3d x = A.lu().solve(Eigen::Vector3d(h[i], h[j], h[k]));
        if (((G * x - h).array() <= 1e-9).all()) best = std::min(best, c.dot(x));
      }
  return best;
}

}  // namespace

TEST_CASE("two-variable LP with a known vertex") {
  // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (1.6, 1.2)
  MatrixXd G(4, 2);
  G << 1, 2, 3, 1, -1, 0, 0, -1;
  VectorXd h(4);
  h << 4, 6, 0, 0;
  VectorXd c(2);
  c << -1, -1;
  const InequalityLpResult r = solve_inequality_lp(G, h, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(-2.8).epsilon(1e-12));
  CHECK(r.tight == std::vector<int>{0, 1});
  // Stationarity: c + G' lambda = 0 with lambda >= 0.
  CHECK((c + G.transpose() * r.lambda).norm() < 1e-12);
  CHECK((r.lambda.array() >= 0.0).all());
}

TEST_CASE("infeasible and unbounded programs") {
  MatrixXd G(2, 1);
  G << -1, 1;
  VectorXd h(2);
  h << -1, 0;  // x >= 1 and x <= 0
  VectorXd c(1);
  c << 1;
  CHECK(solve_inequality_lp(G, h, c).status == LpStatus::infeasible);

  MatrixXd G2(1, 1);
  G2 << 1;
  VectorXd h2(1);
  h2 << 5;
  CHECK(solve_inequality_lp(G2, h2, c).status == LpStatus::unbounded);
}

TEST_CASE("random bounded LPs agree with vertex enumeration") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 12;
    MatrixXd G(m, 3);
    VectorXd h(m);
    for (int i = 0; i < m; ++i) {
      Eigen::Vector3d a(g(rng), g(rng), g(rng));
      G.row(i) = a.normalized().transpose();
      h[i] = 1.0 + std::abs(g(rng));
    }
    // Box rows keep every instance bounded.
    MatrixXd Gb(m + 6, 3);
    VectorXd hb(m + 6);
    Gb << G, Eigen::Matrix3d::Identity(), -Eigen::Matrix3d::Identity();
    hb << h, VectorXd::Constant(6, 10.0);
    const VectorXd c = VectorXd::NullaryExpr(3, [&] { return g(rng); });
    const InequalityLpResult r = solve_inequality_lp(Gb, hb, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(vertex_enumeration(Gb, hb, c)).epsilon(1e-9));
    CHECK(((Gb * r.x - hb).array() <= 1e-9).all());
    CHECK(hb.dot(r.lambda) == doctest::Approx(-r.objective).epsilon(1e-9));
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("degenerate vertex does not cycle") {
  // Many constraints through the optimum (0, 0, 0).
  MatrixXd G(8, 3);
  G << -1, 0, 0, 0, -1, 0, 0, 0, -1, -1, -1, 0, -1, 0, -1, 0, -1, -1, -1, -1, -1, -2, -1, -1;
  const VectorXd h = VectorXd::Zero(8);
  const VectorXd c = Eigen::Vector3d(1, 2, 3);
  const InequalityLpResult r = solve_inequality_lp(G, h, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.x.norm() < 1e-12);
}
