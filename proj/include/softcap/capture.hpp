#pragma once

// Soft-capture trajectory optimization: the convex capture problem without
// collision avoidance, its sequentially linearized collision-avoiding
// refinement, and an a-posteriori check against the original nonconvex
// constraint set.
//
// Node indexing is zero-based: state k lives at t_k = k * dt for
// k = 0..N-1, thrust k acts on [t_k, t_{k+1}) for k = 0..N-2. The capture
// conditions are imposed at the final node t_{N-1}.

#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "softcap/collision.hpp"
#include "softcap/config.hpp"
#include "softcap/conic.hpp"
#include "softcap/relmotion.hpp"
#include "softcap/target.hpp"

namespace softcap {

enum class FovForm {
  corrected,  // ||sqrt(H~) z|| <= sqrt(2 - cos phi)/2 (rho_k + rho_k+1), H~ off-diagonal -I/2
  literal,    // ||sqrt(H) z|| <= sin(phi/2) (rho_k + rho_k+1), H off-diagonal +I/2
};

const char* to_string(FovForm f);
FovForm fov_form_from_string(const std::string& s);

// ||(S (x) I3) [r_k; r_k+1]|| <= kappa (rho_k + rho_k+1), S the square root of
// the 2x2 weighting, phi = omega_max dt.
struct FovConstraint {
  Eigen::Matrix2d sqrt_weight;
  double kappa = 0.0;

  // kappa (rho_a + rho_b) - lhs; nonnegative when satisfied.
  double margin(const Vec3& r_a, const Vec3& r_b, double rho_a, double rho_b) const;
};

FovConstraint fov_constraint(FovForm form, double phi);

struct Limits {
  double thrust_max = 100.0;       // U_max, N
  double velocity_max = 1.5;       // v_max, m/s
  double angular_rate_max = 0.2;   // omega_max, rad/s
  double position_max = 100.0;     // r_max, m
};

struct TerminalTolerances {
  double position = 0.35;  // eps_p, m
  double velocity = 0.03;  // eps_v, m/s
};

struct DockingCone {
  double half_angle = 30.0 * std::numbers::pi / 180.0;  // rad
  int steps = 5;                                        // N_dock
};

struct ScpSettings {
  double alpha_min = 1.3;
  double slack_penalty = 750.0;  // psi
  double control_weight = 5.0;   // gamma
  int max_iterations = 15;       // i_max
  bool weight_problem2_control = false;
};

struct Scenario {
  OrbitContext orbit = OrbitContext::make(7.738e6, 1500.0);
  ChaserState chaser0;
  TargetState target0;
  InertiaMatrix inertia = InertiaMatrix::reference_target();
  CollisionGeometry geometry;
  Vec3 capture_chaser = Vec3(0.0, 0.0, 2.7);  // D_c in {C}, m
  Vec3 capture_target = Vec3(0.0, 0.0, 2.7);  // D_t in {T}, m
  Limits limits;
  TerminalTolerances terminal;
  DockingCone docking;
  ScpSettings scp;
  double dt = 1.0;  // s
  int steps = 100;  // N
  FovForm fov_form = FovForm::corrected;
  // Reject target tumble faster than tumble_rate_bound() as infeasible.
  bool enforce_tumble_bound = true;
  double solver_tolerance = 1e-8;

  // min(omega_max, v_max / (||D_c|| + ||D_t||)).
  double tumble_rate_bound() const;
  void validate() const;
};

// Default mission parameters with the pinned reference initial state.
Scenario reference_scenario();

// Initial-condition sampling shared by scenarios and campaigns.
struct SamplingRanges {
  Range A0{15.0, 25.0};  // m
  Range B0{10.0, 25.0};  // m
  double tumble_rate_max = 10.0 * std::numbers::pi / 180.0;  // rad/s
};

struct InitialConditions {
  ChaserState chaser;
  TargetState target;
  double A0 = 0.0;
  double B0 = 0.0;
};

// Independent stream per (seed, case index); worker layout does not matter.
std::mt19937_64 case_stream(std::uint64_t seed, std::uint64_t case_index);
inline constexpr const char* kCaseStreamAlgorithm = "mt19937_64/seed_seq(seed,case)";

InitialConditions sample_initial_conditions(std::mt19937_64& rng, const SamplingRanges& ranges,
                                            const OrbitContext& orbit);

// Key-value scenario files; see scenarios/reference.toml for every key.
Scenario load_scenario(const KeyValueFile& file);
Scenario load_scenario_file(const std::string& path);
std::string scenario_to_text(const Scenario& s);

// Scenario plus everything derived from it that the optimizer reuses: the
// discrete dynamics and the tumble prediction over horizon_steps nodes.
class CaptureSetup {
 public:
  CaptureSetup(Scenario scenario, int horizon_steps);

  const Scenario& scenario() const { return scenario_; }
  const DiscreteDynamics& dynamics() const { return dynamics_; }
  const TumbleTrajectory& tumble() const { return *tumble_; }
  int horizon_steps() const { return horizon_steps_; }
  double time_of(int k) const { return scenario_.dt * k; }
  TargetState target_at(int k) const { return tumble_->sample(time_of(k)); }

 private:
  Scenario scenario_;
  DiscreteDynamics dynamics_;
  std::shared_ptr<const TumbleTrajectory> tumble_;
  int horizon_steps_;
};

struct ChaserTrajectory {
  double dt = 1.0;
  std::vector<ChaserState> states;     // N
  std::vector<Vec3> thrust;            // N - 1, N
  std::vector<double> rho;             // N, m (empty if unknown)
  std::vector<double> collision_slack; // N or empty
  std::vector<Quaternion> attitudes;   // N or empty

  int steps() const { return static_cast<int>(states.size()); }
};

// Chaser attitude sequence: pointing at the target by minimum rotation from
// the previous node, starting from the identity, with the capture attitude
// at the final node.
std::vector<Quaternion> chaser_attitudes(const CaptureSetup& setup,
                                         const std::vector<ChaserState>& states);

// Full nonlinear alpha_k along the trajectory.
std::vector<double> trajectory_alphas(const CaptureSetup& setup,
                                      const std::vector<ChaserState>& states,
                                      const std::vector<Quaternion>& attitudes);

// Variable positions inside a built capture program.
struct ProblemLayout {
  int steps = 0;
  std::vector<int> r;      // first index of r_k, per node
  std::vector<int> v;      // first index of v_k, per node
  std::vector<int> rho;    // per node
  std::vector<int> u;      // first index of u_k, per control
  std::vector<int> slack;  // collision slack per constrained node (problem 3 only)
  int fov_rows = 0;
  int docking_rows = 0;
  int collision_rows = 0;
};

struct CaptureProgram {
  conic::ConicProgram program;
  ProblemLayout layout;
  std::vector<double> reference_alpha;    // problem 3: alpha_k at the reference
  std::vector<Vec3> reference_jacobian;   // problem 3: J_k at the reference
};

// Throws InvalidInput when the tumble prediction does not reach t_{N-1}.
CaptureProgram build_problem2(const CaptureSetup& setup, int steps);
CaptureProgram build_problem3(const CaptureSetup& setup, const ChaserTrajectory& reference);

ChaserTrajectory extract_trajectory(const CaptureSetup& setup, const CaptureProgram& built,
                                    const conic::SolverOutcome& outcome);

enum class CaptureOutcome { safe, infeasible_problem2, scp_exhausted, numerical_failure };

const char* to_string(CaptureOutcome o);

struct SolveReport {
  CaptureOutcome outcome = CaptureOutcome::numerical_failure;
  int steps = 0;
  ChaserTrajectory trajectory;          // final iterate
  ChaserTrajectory initial_trajectory;  // problem 2 solution
  int iterations = 0;                   // problem 3 solves
  std::vector<std::vector<double>> alpha_history;  // per evaluated iterate, per node
  std::vector<double> alpha_min_history;
  std::vector<double> slack_sum_history;           // per problem 3 solve
  std::vector<double> correction_history;          // max_k |r_k - r_ref,k|, m, per problem 3 solve
  int perturbed_linearizations = 0;
  std::vector<double> solve_times;                 // s, per conic solve
  std::vector<int> solve_steps;                    // N of each conic solve
  double delta_v = 0.0;                            // m/s
  double total_time = 0.0;                         // s
  std::string detail;
  std::string repro_dump;  // failing conic program, debug text format
};

SolveReport solve_capture(const CaptureSetup& setup, int steps);
inline SolveReport solve_capture(const Scenario& s) {
  return solve_capture(CaptureSetup(s, s.steps), s.steps);
}

// Sum ||u_k||_2 dt / m_c.
double delta_v(const ChaserTrajectory& traj, double chaser_mass);
// Fraction of thrust steps with ||u_k|| < 0.01 U_max.
double off_fraction(const ChaserTrajectory& traj, double thrust_max);

struct ResidualRow {
  std::string constraint;
  int step = 0;
  double value = 0.0;
  double limit = 0.0;
  bool satisfied = true;
};

struct VerificationReport {
  std::vector<ResidualRow> rows;
  double max_dynamics_residual = 0.0;
  double max_velocity = 0.0;
  double max_thrust = 0.0;
  double max_fov_angle = 0.0;
  double terminal_position_residual = 0.0;
  double terminal_velocity_residual = 0.0;
  double min_alpha = 0.0;
  double relaxation_tightness = 0.0;  // max_k (rho_k - ||r_k||), m
  double delta_v = 0.0;

  std::vector<ResidualRow> violations() const;
  bool all_satisfied() const { return violations().empty(); }
};

// Feasibility slack allowed on solver-enforced cone constraints.
inline constexpr double kSolverFeasibilitySlack = 1e-6;
// The velocity bound is held to a tighter slack; the programs enforce it with this interior margin.
inline constexpr double kVelocitySlack = 1e-9;
inline constexpr double kVelocityMargin = 1e-7;  // m/s

VerificationReport verify_solution(const CaptureSetup& setup, const ChaserTrajectory& traj);

}  // namespace softcap
