#include <algorithm>
#include <cmath>

#include "softcap/capture.hpp"

namespace softcap {

std::vector<ResidualRow> VerificationReport::violations() const {
  std::vector<ResidualRow> out;
  for (const ResidualRow& r : rows) {
    if (!r.satisfied) out.push_back(r);
  }
  return out;
}

VerificationReport verify_solution(const CaptureSetup& setup, const ChaserTrajectory& traj) {
  const Scenario& s = setup.scenario();
  const int N = traj.steps();
  if (N < 2) throw InvalidInput("trajectory needs at least 2 nodes");
  if (static_cast<int>(traj.thrust.size()) != N - 1) {
    throw InvalidInput("trajectory has " + std::to_string(traj.thrust.size()) + " thrust rows for " +
                       std::to_string(N) + " nodes");
  }
  if (std::abs(traj.dt - s.dt) > 1e-12) throw InvalidInput("trajectory dt differs from scenario dt");
  if (setup.tumble().horizon() + 1e-9 < setup.time_of(N - 1)) {
    throw InvalidInput("tumble prediction shorter than the trajectory");
  }

  VerificationReport rep;
  const double eps = kSolverFeasibilitySlack;
  auto upper = [&](const char* name, int k, double value, double limit) {
    rep.rows.push_back({name, k, value, limit, value <= limit + eps});
  };

  const DiscreteDynamics& dyn = setup.dynamics();
  const Vec6 x0 = s.chaser0.stacked();
  upper("initial_state", 0, (traj.states[0].stacked() - x0).norm(), 0.0);

  for (int k = 0; k + 1 < N; ++k) {
    const double res =
        (traj.states[k + 1].stacked() - dyn.step(traj.states[k].stacked(), traj.thrust[k])).norm();
    rep.max_dynamics_residual = std::max(rep.max_dynamics_residual, res);
    upper("dynamics", k, res, 0.0);
  }
  for (int k = 0; k + 1 < N; ++k) {
    const double u = traj.thrust[k].norm();
    rep.max_thrust = std::max(rep.max_thrust, u);
    upper("thrust", k, u, s.limits.thrust_max);
  }
  for (int k = 0; k < N; ++k) {
    const double v = traj.states[k].v.norm();
    rep.max_velocity = std::max(rep.max_velocity, v);
    rep.rows.push_back({"velocity", k, v, s.limits.velocity_max, v <= s.limits.velocity_max + kVelocitySlack});
    upper("range", k, traj.states[k].r.norm(), s.limits.position_max);
  }

  const double phi = s.limits.angular_rate_max * s.dt;
  for (int k = 0; k + 1 < N; ++k) {
    const Vec3& a = traj.states[k].r;
    const Vec3& b = traj.states[k + 1].r;
    const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
    rep.max_fov_angle = std::max(rep.max_fov_angle, angle);
    upper("fov", k, angle, phi);
  }

  const double tan_dock = std::tan(s.docking.half_angle);
  for (int k = std::max(0, N - s.docking.steps); k < N; ++k) {
    const Mat3 R = to_rotation(setup.target_at(k).q);
    const Vec3 X = R.transpose() * traj.states[k].r - s.capture_target;
    upper("docking", k, X.head<2>().norm() - tan_dock * X.z(), 0.0);
  }

  const TargetState tf = setup.target_at(N - 1);
  const Mat3 Rf = to_rotation(tf.q);
  const Vec3 r_capture = Rf * s.capture_target - to_rotation(terminal_attitude(tf.q)) * s.capture_chaser;
  const Vec3 v_capture = Rf * tf.omega.cross(s.capture_target);
  rep.terminal_position_residual = (traj.states[N - 1].r - r_capture).norm();
  rep.terminal_velocity_residual = (traj.states[N - 1].v - v_capture).norm();
  upper("terminal_position", N - 1, rep.terminal_position_residual, s.terminal.position);
  upper("terminal_velocity", N - 1, rep.terminal_velocity_residual, s.terminal.velocity);

  const std::vector<Quaternion> att = chaser_attitudes(setup, traj.states);
  const std::vector<double> alphas = trajectory_alphas(setup, traj.states, att);
  rep.min_alpha = *std::min_element(alphas.begin(), alphas.end());
  for (int k = 0; k < N; ++k) {
    rep.rows.push_back({"collision", k, alphas[k], 1.0, alphas[k] > 1.0});
  }

  if (static_cast<int>(traj.rho.size()) == N) {
    for (int k = 0; k < N; ++k) {
      rep.relaxation_tightness = std::max(rep.relaxation_tightness, traj.rho[k] - traj.states[k].r.norm());
    }
  }
  rep.delta_v = delta_v(traj, s.orbit.chaser_mass);
  return rep;
}

}  // namespace softcap
