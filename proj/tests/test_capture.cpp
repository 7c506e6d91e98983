#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "softcap/capture.hpp"
#include "softcap/harness.hpp"

using namespace softcap;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 rotate_about(const Vec3& v, const Vec3& axis, double angle) {
  return to_rotation(Quaternion::from_axis_angle(axis, angle)) * v;
}

Scenario case_scenario(std::uint64_t seed, std::uint64_t id) {
  CampaignConfig cfg;
  cfg.seed = seed;
  const InitialConditions ic = campaign_case(cfg, id);
  Scenario s = reference_scenario();
  s.chaser0 = ic.chaser;
  s.target0 = ic.target;
  return s;
}

}  // namespace

TEST_CASE("field-of-view coefficients") {
  CHECK(fov_constraint(FovForm::corrected, 0.2).kappa == doctest::Approx(0.50496).epsilon(1e-5));
  CHECK(fov_constraint(FovForm::literal, 0.2).kappa == doctest::Approx(0.09983).epsilon(1e-4));
  const Eigen::Matrix2d S = fov_constraint(FovForm::corrected, 0.2).sqrt_weight;
  Eigen::Matrix2d H;
  H << 1.0, -0.5, -0.5, 1.0;
  CHECK((S * S - H).norm() < 1e-14);
}

TEST_CASE("corrected form at equal ranges is the line-of-sight angle bound") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> U(0.0, std::numbers::pi);
  const double phi = 0.2;
  const FovConstraint c = fov_constraint(FovForm::corrected, phi);
  for (int i = 0; i < 500; ++i) {
    const double rho = 1.0 + 50.0 * std::abs(g(rng));
    const Vec3 a = rho * Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 axis = a.cross(Vec3(g(rng), g(rng), g(rng))).normalized();
    const double angle = U(rng);
    const Vec3 b = rotate_about(a, axis, angle);
    const double m = c.margin(a, b, rho, rho);
    CHECK((m >= -1e-9 * rho) == (angle <= phi + 1e-9));
    // On the boundary the margin vanishes.
    CHECK(std::abs(c.margin(a, rotate_about(a, axis, phi), rho, rho)) <= 1e-9 * rho);
  }
}

TEST_CASE("corrected form is never looser than the angle bound at tight slack") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> g;
  const double phi = 0.2;
  const FovConstraint c = fov_constraint(FovForm::corrected, phi);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 a = Vec3(g(rng), g(rng), g(rng)) * 10.0;
    const Vec3 b = a + Vec3(g(rng), g(rng), g(rng));
    if (c.margin(a, b, a.norm(), b.norm()) >= 0.0) {
      CHECK(std::atan2(a.cross(b).norm(), a.dot(b)) <= phi + 1e-12);
    }
  }
}

TEST_CASE("literal form excludes even a motionless line of sight") {
  const FovConstraint c = fov_constraint(FovForm::literal, 0.2);
  const Vec3 a(10, 0, 0);
  CHECK(c.margin(a, a, 10.0, 10.0) < 0.0);
}

TEST_CASE("problem 2 on the reference scenario") {
  Scenario s = reference_scenario();
  s.steps = 80;
  const CaptureSetup setup(s, 80);
  const CaptureProgram p = build_problem2(setup, 80);
  CHECK(p.layout.fov_rows == 79);
  CHECK(p.layout.docking_rows == 5);
  CHECK(p.layout.collision_rows == 0);
  CHECK(p.layout.u.size() == 79);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.program.lower()[p.layout.r[0] + i] == s.chaser0.r[i]);
    CHECK(p.program.upper()[p.layout.v[0] + i] == s.chaser0.v[i]);
  }
  const conic::SolverOutcome out = conic::solve(p.program);
  REQUIRE(out.status == conic::SolveStatus::optimal);
  const ChaserTrajectory t = extract_trajectory(setup, p, out);
  const VerificationReport v = verify_solution(setup, t);
  CHECK(v.max_dynamics_residual < 1e-6);
  CHECK(v.terminal_position_residual <= s.terminal.position + kSolverFeasibilitySlack);
  CHECK(v.terminal_velocity_residual <= s.terminal.velocity + kSolverFeasibilitySlack);
  CHECK(v.max_velocity <= s.limits.velocity_max + kSolverFeasibilitySlack);
  for (const ResidualRow& r : v.rows) {
    if (r.constraint == "docking") CHECK(r.satisfied);
  }
  CHECK(delta_v(t, s.orbit.chaser_mass) == doctest::Approx(v.delta_v));
  CHECK(out.objective > 0.0);

  // The dump reproduces the program and its solution.
  const conic::ConicProgram q = conic::ConicProgram::parse(p.program.dump());
  CHECK(q == p.program);
  CHECK(conic::solve(q).objective == doctest::Approx(out.objective).epsilon(1e-9));
}

TEST_CASE("delta-v is the thrust impulse per unit mass") {
  ChaserTrajectory t;
  t.dt = 2.0;
  t.states.resize(3);
  t.thrust = {Vec3(3, 4, 0), Vec3(0, 0, -1)};
  CHECK(delta_v(t, 10.0) == doctest::Approx((5.0 + 1.0) * 2.0 / 10.0).epsilon(1e-15));
  CHECK(off_fraction(t, 200.0) == doctest::Approx(0.5));
}

TEST_CASE("problem 3 linearizes alpha at the reference") {
  Scenario s = case_scenario(7, 5);
  const CaptureSetup setup(s, 80);
  const CaptureProgram p2 = build_problem2(setup, 80);
  const conic::SolverOutcome out = conic::solve(p2.program);
  REQUIRE(out.status == conic::SolveStatus::optimal);
  const ChaserTrajectory ref = extract_trajectory(setup, p2, out);
  const CaptureProgram p3 = build_problem3(setup, ref);
  CHECK(p3.layout.collision_rows == 80);
  CHECK(p3.layout.slack.size() == 80);
  const std::vector<double> a = trajectory_alphas(setup, ref.states, chaser_attitudes(setup, ref.states));
  for (int k = 0; k < 80; ++k) CHECK(p3.reference_alpha[k] == doctest::Approx(a[k]).epsilon(1e-9));
  CHECK(p3.program.cost()[p3.layout.slack[0]] == s.scp.slack_penalty);
}

TEST_CASE("sequential solve reaches a collision-free trajectory") {
  const Scenario s = case_scenario(7, 5);
  const CaptureSetup setup(s, 80);
  const SolveReport r = solve_capture(setup, 80);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  CHECK(r.iterations >= 1);
  CHECK(r.alpha_min_history.front() <= 1.0);
  CHECK(r.alpha_min_history.back() > 1.0);
  CHECK(r.slack_sum_history.size() == static_cast<std::size_t>(r.iterations));
  CHECK(r.solve_times.size() == static_cast<std::size_t>(r.iterations + 1));
  const VerificationReport v = verify_solution(setup, r.trajectory);
  CHECK(v.min_alpha > 1.0);
  CHECK(v.min_alpha == doctest::Approx(r.alpha_min_history.back()));
  CHECK(r.trajectory.attitudes.size() == 80);
  CHECK(r.delta_v == doctest::Approx(delta_v(r.trajectory, s.orbit.chaser_mass)).epsilon(1e-12));
}

TEST_CASE("attitude sequence points at the target and ends at capture") {
  const Scenario s = reference_scenario();
  const CaptureSetup setup(s, 100);
  const SolveReport r = solve_capture(setup, 100);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  const auto& q = r.trajectory.attitudes;
  const auto& x = r.trajectory.states;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    CHECK((to_rotation(q[k]) * Vec3::UnitZ() + x[k].r.normalized()).norm() < 1e-9);
  }
  const Quaternion qt = setup.target_at(99).q;
  CHECK(angle_between(q.back(), terminal_attitude(qt)) < 1e-12);
}

TEST_CASE("fast tumble is rejected before any solve") {
  Scenario s = reference_scenario();
  s.target0.omega = Vec3(15.0, 0.0, 0.0) * kDeg;
  CHECK(s.target0.omega.norm() > s.tumble_rate_bound());
  CHECK(s.tumble_rate_bound() == doctest::Approx(0.2));
  const SolveReport r = solve_capture(CaptureSetup(s, 100), 100);
  CHECK(r.outcome == CaptureOutcome::infeasible_problem2);
  CHECK(r.solve_times.empty());
}

TEST_CASE("literal field-of-view form leaves problem 2 infeasible") {
  Scenario s = reference_scenario();
  s.fov_form = FovForm::literal;
  const SolveReport r = solve_capture(CaptureSetup(s, 100), 100);
  CHECK(r.outcome == CaptureOutcome::infeasible_problem2);
}

TEST_CASE("too short a horizon is infeasible rather than wrong") {
  const SolveReport r = solve_capture(CaptureSetup(reference_scenario(), 20), 20);
  CHECK(r.outcome == CaptureOutcome::infeasible_problem2);
}

TEST_CASE("missing tumble prediction is a build error") {
  const CaptureSetup setup(reference_scenario(), 50);
  CHECK_THROWS_AS(build_problem2(setup, 60), InvalidInput);
  CHECK_NOTHROW(build_problem2(setup, 50));
}

TEST_CASE("verification flags a single speed violation") {
  const Scenario s = reference_scenario();
  const CaptureSetup setup(s, 100);
  const SolveReport r = solve_capture(setup, 100);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  REQUIRE(verify_solution(setup, r.trajectory).all_satisfied());
  ChaserTrajectory t = r.trajectory;
  t.states[40].v = t.states[40].v.normalized() * 1.6;
  int speed_rows = 0;
  for (const ResidualRow& row : verify_solution(setup, t).violations()) {
    if (row.constraint == "velocity") {
      ++speed_rows;
      CHECK(row.step == 40);
      CHECK(row.value == doctest::Approx(1.6));
    }
  }
  CHECK(speed_rows == 1);
}

TEST_CASE("verification rejects malformed trajectories") {
  const CaptureSetup setup(reference_scenario(), 10);
  ChaserTrajectory t;
  t.dt = 1.0;
  t.states.resize(5);
  t.thrust.resize(2);
  CHECK_THROWS_AS(verify_solution(setup, t), InvalidInput);
  t.states.resize(20);
  t.thrust.resize(19);
  CHECK_THROWS_AS(verify_solution(setup, t), InvalidInput);
}

TEST_CASE("chaser already at the capture pose of a still target") {
  Scenario s = reference_scenario();
  s.target0 = TargetState{Quaternion::identity(), Vec3::Zero()};
  s.chaser0 = ChaserState{s.capture_target + s.capture_chaser, Vec3::Zero()};
  const int N = 5;
  const CaptureSetup setup(s, N);
  const CaptureProgram p = build_problem2(setup, N);
  const conic::SolverOutcome out = conic::solve(p.program);
  REQUIRE(out.status == conic::SolveStatus::optimal);
  const ChaserTrajectory t = extract_trajectory(setup, p, out);
  double range_sum = 0.0;
  for (const ChaserState& x : t.states) range_sum += x.r.norm();
  for (const Vec3& u : t.thrust) CHECK(u.norm() < 1e-6);
  CHECK(out.objective == doctest::Approx(range_sum).epsilon(1e-6));
}

TEST_CASE("a start overlapping the target never becomes safe") {
  Scenario s = reference_scenario();
  s.chaser0 = ChaserState{Vec3(0.8, 0.0, 0.0), Vec3::Zero()};
  s.scp.max_iterations = 2;
  const SolveReport r = solve_capture(CaptureSetup(s, 40), 40);
  CHECK(r.outcome != CaptureOutcome::safe);
  CHECK(r.outcome != CaptureOutcome::numerical_failure);
  for (double a : r.alpha_min_history) CHECK(a < 1.0);
}

TEST_CASE("large slack penalty drives collision slack to zero") {
  Scenario s = case_scenario(7, 5);
  const int N = 80;
  const SolveReport r = solve_capture(CaptureSetup(s, N), N);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  auto slack_at = [&](double psi) {
    s.scp.slack_penalty = psi;
    const CaptureSetup setup(s, N);
    const CaptureProgram p3 = build_problem3(setup, r.trajectory);
    const conic::SolverOutcome o = conic::solve(p3.program);
    REQUIRE(o.status == conic::SolveStatus::optimal);
    double sum = 0.0;
    for (double v : extract_trajectory(setup, p3, o).collision_slack) sum += v;
    return sum;
  };
  const double loose = slack_at(750.0);
  const double exact = slack_at(1e6);
  CHECK(loose > 0.1);
  CHECK(exact <= 1e-9);
}

TEST_CASE("a reference clear of the safety margin is a fixed point") {
  // The first problem 3 solve rebalances thrust against range; the second starts from its own optimum.
  const Scenario s = case_scenario(7, 8);
  const int N = 40;
  const CaptureSetup setup(s, N);
  const CaptureProgram p2 = build_problem2(setup, N);
  const conic::SolverOutcome o2 = conic::solve(p2.program);
  REQUIRE(o2.status == conic::SolveStatus::optimal);
  ChaserTrajectory ref = extract_trajectory(setup, p2, o2);
  ref.attitudes = chaser_attitudes(setup, ref.states);
  auto next = [&](const ChaserTrajectory& from) {
    const CaptureProgram p3 = build_problem3(setup, from);
    const conic::SolverOutcome o = conic::solve(p3.program);
    REQUIRE(o.status == conic::SolveStatus::optimal);
    ChaserTrajectory t = extract_trajectory(setup, p3, o);
    t.attitudes = chaser_attitudes(setup, t.states);
    return t;
  };
  const ChaserTrajectory a = next(ref);
  const std::vector<double> alphas = trajectory_alphas(setup, a.states, a.attitudes);
  REQUIRE(*std::min_element(alphas.begin(), alphas.end()) >= s.scp.alpha_min + 0.5);
  const ChaserTrajectory b = next(a);
  double shift = 0.0;
  for (int k = 0; k < N; ++k) shift = std::max(shift, (b.states[k].r - a.states[k].r).norm());
  CHECK(shift < 1e-4);
  for (double v : b.collision_slack) CHECK(v < 1e-8);
}

TEST_CASE("sampled scenario with seed 42 solves and verifies") {
  CampaignConfig cfg;
  cfg.seed = 42;
  const InitialConditions ic = campaign_case(cfg, 0);
  Scenario s = reference_scenario();
  s.chaser0 = ic.chaser;
  s.target0 = ic.target;
  const SolveReport r = solve_capture(CaptureSetup(s, 100), 100);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  const VerificationReport v = verify_solution(CaptureSetup(s, 100), r.trajectory);
  CHECK(v.all_satisfied());
  CHECK(v.terminal_position_residual <= s.terminal.position + kSolverFeasibilitySlack);
  CHECK(v.terminal_velocity_residual <= s.terminal.velocity + kSolverFeasibilitySlack);
  CHECK(r.correction_history.size() == static_cast<std::size_t>(r.iterations));
}
