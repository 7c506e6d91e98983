#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "softcap/capture.hpp"

namespace softcap {

const char* to_string(CaptureOutcome o) {
  switch (o) {
    case CaptureOutcome::safe: return "safe";
    case CaptureOutcome::infeasible_problem2: return "infeasible-problem2";
    case CaptureOutcome::scp_exhausted: return "scp-exhausted";
    case CaptureOutcome::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void attach_attitudes(const CaptureSetup& setup, ChaserTrajectory& t) {
  t.attitudes = chaser_attitudes(setup, t.states);
}

constexpr double kReferencePerturbation = 1e-6;  // m

ChaserTrajectory perturbed(const CaptureSetup& setup, ChaserTrajectory t) {
  const Vec3 d = Vec3::Ones().normalized() * kReferencePerturbation;
  for (std::size_t k = 1; k < t.states.size(); ++k) t.states[k].r += d;
  attach_attitudes(setup, t);
  return t;
}

double max_correction(const ChaserTrajectory& a, const ChaserTrajectory& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) m = std::max(m, (a.states[k].r - b.states[k].r).norm());
  return m;
}

}  // namespace

SolveReport solve_capture(const CaptureSetup& setup, int steps) {
  const Clock::time_point start = Clock::now();
  const Scenario& s = setup.scenario();
  SolveReport rep;
  rep.steps = steps;
  auto finish = [&](CaptureOutcome o, std::string detail) {
    rep.outcome = o;
    rep.detail = std::move(detail);
    rep.delta_v = delta_v(rep.trajectory, s.orbit.chaser_mass);
    rep.total_time = seconds_since(start);
    return rep;
  };

  const double rate = s.target0.omega.norm();
  if (s.enforce_tumble_bound && rate > s.tumble_rate_bound()) {
    return finish(CaptureOutcome::infeasible_problem2,
                  "target rate " + std::to_string(rate) + " rad/s exceeds tumble bound " +
                      std::to_string(s.tumble_rate_bound()) + " rad/s");
  }

  const conic::SolverSettings settings{s.solver_tolerance, 100};
  auto run = [&](const CaptureProgram& built) {
    conic::SolverOutcome out = conic::solve(built.program, settings);
    rep.solve_times.push_back(out.solve_time);
    rep.solve_steps.push_back(steps);
    return out;
  };

  CaptureProgram p2 = build_problem2(setup, steps);
  conic::SolverOutcome out = run(p2);
  if (out.status == conic::SolveStatus::infeasible) {
    return finish(CaptureOutcome::infeasible_problem2, "problem 2: " + out.diagnostics);
  }
  if (out.status != conic::SolveStatus::optimal) {
    rep.repro_dump = p2.program.dump();
    return finish(CaptureOutcome::numerical_failure,
                  std::string("problem 2: ") + conic::to_string(out.status) + ": " + out.diagnostics);
  }
  rep.trajectory = extract_trajectory(setup, p2, out);
  attach_attitudes(setup, rep.trajectory);
  rep.initial_trajectory = rep.trajectory;

  for (int it = 0;; ++it) {
    std::vector<double> a;
    try {
      a = trajectory_alphas(setup, rep.trajectory.states, rep.trajectory.attitudes);
    } catch (const std::runtime_error& e) {
      return finish(CaptureOutcome::numerical_failure, std::string("alpha evaluation: ") + e.what());
    }
    const double a_min = *std::min_element(a.begin(), a.end());
    rep.alpha_history.push_back(std::move(a));
    rep.alpha_min_history.push_back(a_min);
    if (a_min > 1.0) return finish(CaptureOutcome::safe, "");
    if (it == s.scp.max_iterations) {
      return finish(CaptureOutcome::scp_exhausted,
                    "min alpha " + std::to_string(a_min) + " after " + std::to_string(it) + " iterations");
    }

    ChaserTrajectory reference = rep.trajectory;
    std::optional<CaptureProgram> built;
    try {
      built = build_problem3(setup, reference);
    } catch (const std::runtime_error&) {
      reference = perturbed(setup, reference);
      ++rep.perturbed_linearizations;
      try {
        built = build_problem3(setup, reference);
      } catch (const std::runtime_error& e) {
        return finish(CaptureOutcome::numerical_failure, "problem 3 iteration " + std::to_string(it + 1) +
                                                             ": linearization failed after perturbation: " +
                                                             e.what());
      }
    }
    const CaptureProgram& p3 = *built;
    out = run(p3);
    ++rep.iterations;
    if (out.status != conic::SolveStatus::optimal) {
      rep.repro_dump = p3.program.dump();
      return finish(CaptureOutcome::numerical_failure, "problem 3 iteration " + std::to_string(it + 1) +
                                                           ": " + conic::to_string(out.status) + ": " +
                                                           out.diagnostics);
    }
    rep.trajectory = extract_trajectory(setup, p3, out);
    attach_attitudes(setup, rep.trajectory);
    rep.correction_history.push_back(max_correction(rep.trajectory, reference));
    const auto& sl = rep.trajectory.collision_slack;
    rep.slack_sum_history.push_back(std::accumulate(sl.begin(), sl.end(), 0.0));
  }
}

}  // namespace softcap
