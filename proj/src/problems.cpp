#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "softcap/capture.hpp"

namespace softcap {

namespace {

using conic::ConicProgram;
using conic::LinearTerm;

// Index of a fresh variable defined by var = sum(terms) + offset.
int define(ConicProgram& p, const std::vector<LinearTerm>& terms, double offset) {
  const int v = p.add_variable();
  std::vector<LinearTerm> row{{v, 1.0}};
  for (const LinearTerm& t : terms) row.push_back({t.var, -t.coef});
  p.add_equality(std::move(row), offset);
  return v;
}

std::vector<LinearTerm> dot_terms(const Vec3& a, int first) {
  return {{first, a.x()}, {first + 1, a.y()}, {first + 2, a.z()}};
}

int fixed(ConicProgram& p, double value) {
  const int v = p.add_variable();
  p.fix(v, value);
  return v;
}

// || x[first..first+3) - target || <= radius
void add_ball(ConicProgram& p, int first, const Vec3& target, double radius) {
  const int head = fixed(p, radius);
  const int tail[3] = {define(p, {{first, 1.0}}, -target.x()),
                       define(p, {{first + 1, 1.0}}, -target.y()),
                       define(p, {{first + 2, 1.0}}, -target.z())};
  p.add_soc(head, tail);
}

void check_horizon(const CaptureSetup& setup, int steps) {
  if (steps < 2) throw InvalidInput("capture problem needs N >= 2");
  const double needed = setup.time_of(steps - 1);
  if (setup.tumble().horizon() + 1e-9 < needed) {
    throw InvalidInput("tumble prediction ends at t = " + std::to_string(setup.tumble().horizon()) +
                       " s, capture problem needs t = " + std::to_string(needed) + " s");
  }
  if (setup.scenario().docking.steps > steps) {
    throw InvalidInput("N_dock exceeds N");
  }
}

// Common constraint set; collision rows are added by the caller.
CaptureProgram build_base(const CaptureSetup& setup, int steps, double control_weight) {
  check_horizon(setup, steps);
  const Scenario& s = setup.scenario();
  const DiscreteDynamics& dyn = setup.dynamics();
  CaptureProgram out;
  ConicProgram& p = out.program;
  ProblemLayout& L = out.layout;
  L.steps = steps;

  for (int k = 0; k < steps; ++k) {
    L.r.push_back(p.add_variables(3));
    L.v.push_back(p.add_variables(3));
    L.rho.push_back(p.add_variable(1.0, 0.0, s.limits.position_max));
    if (k + 1 < steps) L.u.push_back(p.add_variables(3));
  }

  for (int i = 0; i < 3; ++i) {
    p.fix(L.r[0] + i, s.chaser0.r[i]);
    p.fix(L.v[0] + i, s.chaser0.v[i]);
  }

  const FovConstraint fov = fov_constraint(s.fov_form, s.limits.angular_rate_max * s.dt);
  const int N = steps;
  const TargetState final_target = setup.target_at(N - 1);
  const Mat3 R_final = to_rotation(final_target.q);
  const Mat3 R_chaser_final = to_rotation(terminal_attitude(final_target.q));
  const Vec3 r_capture = R_final * s.capture_target - R_chaser_final * s.capture_chaser;
  const Vec3 v_capture = R_final * final_target.omega.cross(s.capture_target);
  const double tan_dock = std::tan(s.docking.half_angle);

  for (int k = 0; k < N; ++k) {
    if (k + 1 < N) {
      // x_{k+1} = A_d x_k + B_d u_k
      for (int i = 0; i < 6; ++i) {
        std::vector<LinearTerm> row;
        row.push_back({(i < 3 ? L.r[k + 1] : L.v[k + 1]) + i % 3, 1.0});
        for (int j = 0; j < 6; ++j) {
          const double a = dyn.A_d(i, j);
          if (a != 0.0) row.push_back({(j < 3 ? L.r[k] : L.v[k]) + j % 3, -a});
        }
        for (int j = 0; j < 3; ++j) {
          const double b = dyn.B_d(i, j);
          if (b != 0.0) row.push_back({L.u[k] + j, -b});
        }
        p.add_equality(std::move(row), 0.0);
      }

      const int thrust[3] = {L.u[k], L.u[k] + 1, L.u[k] + 2};
      l1_epigraph(p, thrust, control_weight);
      p.add_soc(fixed(p, s.limits.thrust_max), thrust);
    }

    const int vel[3] = {L.v[k], L.v[k] + 1, L.v[k] + 2};
    p.add_soc(fixed(p, s.limits.velocity_max - kVelocityMargin), vel);

    const int pos[3] = {L.r[k], L.r[k] + 1, L.r[k] + 2};
    p.add_soc(L.rho[k], pos);

    if (k + 1 < N) {
      int tail[6];
      for (int blk = 0; blk < 2; ++blk) {
        for (int i = 0; i < 3; ++i) {
          tail[3 * blk + i] = define(
              p, {{L.r[k] + i, fov.sqrt_weight(blk, 0)}, {L.r[k + 1] + i, fov.sqrt_weight(blk, 1)}}, 0.0);
        }
      }
      const int head = define(p, {{L.rho[k], fov.kappa}, {L.rho[k + 1], fov.kappa}}, 0.0);
      p.add_soc(head, tail);
      ++L.fov_rows;
    }

    if (k >= N - s.docking.steps) {
      // Approach inside the cone about the target capture axis, in {T}.
      const Mat3 Rt = to_rotation(setup.target_at(k).q).transpose();
      const Vec3& D = s.capture_target;
      const int tail[2] = {define(p, dot_terms(Rt.row(0).transpose(), L.r[k]), -D.x()),
                           define(p, dot_terms(Rt.row(1).transpose(), L.r[k]), -D.y())};
      const int head = define(p, dot_terms(tan_dock * Rt.row(2).transpose(), L.r[k]), -tan_dock * D.z());
      p.add_soc(head, tail);
      ++L.docking_rows;
    }
  }

  add_ball(p, L.r[N - 1], r_capture, s.terminal.position);
  add_ball(p, L.v[N - 1], v_capture, s.terminal.velocity);
  return out;
}

}  // namespace

double FovConstraint::margin(const Vec3& r_a, const Vec3& r_b, double rho_a, double rho_b) const {
  const Vec3 w0 = sqrt_weight(0, 0) * r_a + sqrt_weight(0, 1) * r_b;
  const Vec3 w1 = sqrt_weight(1, 0) * r_a + sqrt_weight(1, 1) * r_b;
  return kappa * (rho_a + rho_b) - std::sqrt(w0.squaredNorm() + w1.squaredNorm());
}

FovConstraint fov_constraint(FovForm form, double phi) {
  const double off = form == FovForm::corrected ? -0.5 : 0.5;
  Eigen::Matrix2d m;
  m << 1.0, off, off, 1.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  FovConstraint c;
  c.sqrt_weight = es.operatorSqrt();
  c.kappa = form == FovForm::corrected ? std::sqrt(2.0 - std::cos(phi)) / 2.0 : std::sin(phi / 2.0);
  return c;
}

std::vector<Quaternion> chaser_attitudes(const CaptureSetup& setup,
                                         const std::vector<ChaserState>& states) {
  const int N = static_cast<int>(states.size());
  std::vector<Quaternion> q;
  q.reserve(states.size());
  Quaternion prev = Quaternion::identity();
  for (int k = 0; k < N; ++k) {
    if (k == N - 1) {
      q.push_back(terminal_attitude(setup.target_at(k).q));
    } else {
      prev = pointing_attitude(states[k].r, prev);
      q.push_back(prev);
    }
  }
  return q;
}

std::vector<double> trajectory_alphas(const CaptureSetup& setup,
                                      const std::vector<ChaserState>& states,
                                      const std::vector<Quaternion>& attitudes) {
  const CollisionGeometry& g = setup.scenario().geometry;
  std::vector<double> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Pose chaser{states[k].r, attitudes.at(k)};
    const Pose target{Vec3::Zero(), setup.target_at(static_cast<int>(k)).q};
    out.push_back(alpha(g.chaser, chaser, g.target, target).alpha);
  }
  return out;
}

CaptureProgram build_problem2(const CaptureSetup& setup, int steps) {
  const ScpSettings& scp = setup.scenario().scp;
  return build_base(setup, steps, scp.weight_problem2_control ? scp.control_weight : 1.0);
}

CaptureProgram build_problem3(const CaptureSetup& setup, const ChaserTrajectory& reference) {
  const Scenario& s = setup.scenario();
  const int N = reference.steps();
  CaptureProgram out = build_base(setup, N, s.scp.control_weight);
  ConicProgram& p = out.program;
  ProblemLayout& L = out.layout;

  const CollisionGeometry& g = s.geometry;
  Quaternion prev = Quaternion::identity();
  for (int k = 0; k < N; ++k) {
    const Vec3& rk = reference.states[k].r;
    const TargetState tk = setup.target_at(k);
    double a;
    Vec3 J;
    if (k == N - 1) {
      // Capture attitude is fixed by the target, only position moves alpha.
      const Pose chaser{rk, terminal_attitude(tk.q)};
      const Pose target{Vec3::Zero(), tk.q};
      a = alpha(g.chaser, chaser, g.target, target).alpha;
      J = alpha_gradient(g.chaser, chaser, g.target, target).d_position1;
    } else {
      const ComposedAlpha c = composed_alpha_and_gradient(rk, prev, tk.q, g);
      a = c.alpha;
      J = c.jacobian;
      prev = c.chaser_attitude;
    }
    out.reference_alpha.push_back(a);
    out.reference_jacobian.push_back(J);

    // alpha_k + J (r_k - r_ref) + s_k - alpha_min >= 0
    const int slack = p.add_variable(s.scp.slack_penalty, 0.0, conic::kInf);
    L.slack.push_back(slack);
    std::vector<LinearTerm> terms = dot_terms(J, L.r[k]);
    terms.push_back({slack, 1.0});
    const int margin = define(p, terms, a - J.dot(rk) - s.scp.alpha_min);
    const int m[1] = {margin};
    p.add_nonnegative(m);
    ++L.collision_rows;
  }
  return out;
}

ChaserTrajectory extract_trajectory(const CaptureSetup& setup, const CaptureProgram& built,
                                    const conic::SolverOutcome& outcome) {
  if (outcome.status != conic::SolveStatus::optimal) {
    throw std::logic_error("extract_trajectory needs an optimal solve");
  }
  const ProblemLayout& L = built.layout;
  const std::vector<double>& x = outcome.primal;
  auto v3 = [&](int i) { return Vec3(x[i], x[i + 1], x[i + 2]); };
  ChaserTrajectory t;
  t.dt = setup.scenario().dt;
  for (int k = 0; k < L.steps; ++k) {
    t.states.push_back({v3(L.r[k]), v3(L.v[k])});
    t.rho.push_back(x[L.rho[k]]);
  }
  for (int idx : L.u) t.thrust.push_back(v3(idx));
  for (int idx : L.slack) t.collision_slack.push_back(x[idx]);
  return t;
}

double delta_v(const ChaserTrajectory& traj, double chaser_mass) {
  double total = 0.0;
  for (const Vec3& u : traj.thrust) total += u.norm();
  return total * traj.dt / chaser_mass;
}

double off_fraction(const ChaserTrajectory& traj, double thrust_max) {
  if (traj.thrust.empty()) return 0.0;
  int off = 0;
  for (const Vec3& u : traj.thrust) off += u.norm() < 0.01 * thrust_max ? 1 : 0;
  return static_cast<double>(off) / static_cast<double>(traj.thrust.size());
}

}  // namespace softcap
