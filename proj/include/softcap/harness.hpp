#pragma once

// Monte Carlo capture campaigns: seeded initial conditions, a search over
// horizon length N per case, and summary statistics.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "softcap/capture.hpp"
#include "json.hpp"

namespace softcap {

struct CampaignConfig {
  int n_samples = 250;
  std::uint64_t seed = 1;
  int N_min = 40;
  int N_max = 350;
  int N_step = 10;
  SamplingRanges ranges;
  Scenario scenario = reference_scenario();  // initial state is replaced per case
  int workers = 1;
  std::string trajectory_dir;  // per-case trajectory CSVs for successes, if set

  void validate() const;
};

// Reads a [campaign] section (n_samples, seed, N_min, N_max, N_step,
// tumble_rate_max_deg, A0, B0, workers, scenario) from a key-value file.
// A relative scenario path is resolved against the config file directory.
CampaignConfig load_campaign_file(const std::string& path);

struct CaseResult {
  std::uint64_t case_id = 0;
  InitialConditions initial;
  CaptureOutcome outcome = CaptureOutcome::infeasible_problem2;
  int N = 0;  // chosen N, 0 when no N was safe
  int solves_attempted = 0;  // solve_capture calls
  int scp_iterations = 0;
  double delta_v = 0.0;
  double min_alpha = 0.0;
  double terminal_position_residual = 0.0;
  double terminal_velocity_residual = 0.0;
  double relaxation_tightness = 0.0;
  double off_fraction = 0.0;
  bool verified = false;  // success re-checked against the nonconvex constraints
  int unverified_safe = 0;  // collision-safe solves rejected by verify_solution
  int numerical_failures = 0;
  double wall_time = 0.0;
  std::vector<double> slack_sum_history;
  std::vector<std::pair<int, double>> conic_solves;  // (N, seconds)
  std::string detail;
  std::optional<ChaserTrajectory> trajectory;

  double tumble_rate_deg() const;
  double initial_range() const { return initial.chaser.r.norm(); }
};

// Tries N = N_min, N_min + N_step, ... <= N_max and stops at the first safe
// solve that also passes verify_solution. The tumble is propagated once to
// N_max nodes.
CaseResult n_search(std::uint64_t case_id, const InitialConditions& ic, const CampaignConfig& cfg);

struct CampaignSummary {
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;
  int successes = 0;
  double success_fraction = 0.0;
  std::map<int, int> iteration_histogram;  // SCP iterations -> successes
  double mean_solve_time = 0.0;            // s, over all conic solves
  double median_solve_time_upto_150 = 0.0; // s, conic solves with N <= 150
};

InitialConditions campaign_case(const CampaignConfig& cfg, std::uint64_t case_id);
CampaignSummary run_campaign(const CampaignConfig& cfg);

// Deterministic per-case rows; wall-clock data goes to write_timings_csv.
void write_summary_csv(std::ostream& out, const CampaignSummary& s);
void write_timings_csv(std::ostream& out, const CampaignSummary& s);
nlohmann::json aggregate_json(const CampaignSummary& s, const CampaignConfig& cfg);

}  // namespace softcap
