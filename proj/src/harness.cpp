#include "softcap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include "softcap/io.hpp"

namespace softcap {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void CampaignConfig::validate() const {
  if (n_samples < 0) throw InvalidInput("n_samples must be nonnegative");
  if (!(N_min >= 2 && N_min < N_max)) throw InvalidInput("need 2 <= N_min < N_max");
  if (N_step < 1) throw InvalidInput("N_step must be positive");
  if (!(ranges.A0.lo > 0.0 && ranges.A0.lo <= ranges.A0.hi) ||
      !(ranges.B0.lo > 0.0 && ranges.B0.lo <= ranges.B0.hi)) {
    throw InvalidInput("A0 and B0 ranges must be positive with lo <= hi");
  }
  if (!(ranges.tumble_rate_max >= 0.0)) throw InvalidInput("tumble rate cap must be nonnegative");
  if (workers < 1) throw InvalidInput("workers must be at least 1");
  scenario.validate();
}

CampaignConfig load_campaign_file(const std::string& path) {
  const KeyValueFile f = KeyValueFile::load(path);
  CampaignConfig cfg;
  try {
    f.reject_unknown({"campaign.n_samples", "campaign.seed", "campaign.N_min", "campaign.N_max",
                      "campaign.N_step", "campaign.tumble_rate_max_deg", "campaign.A0", "campaign.B0",
                      "campaign.workers", "campaign.scenario", "campaign.trajectory_dir"});
    cfg.n_samples = static_cast<int>(f.get_int("campaign.n_samples", cfg.n_samples));
    cfg.seed = static_cast<std::uint64_t>(f.get_int("campaign.seed", static_cast<long long>(cfg.seed)));
    cfg.N_min = static_cast<int>(f.get_int("campaign.N_min", cfg.N_min));
    cfg.N_max = static_cast<int>(f.get_int("campaign.N_max", cfg.N_max));
    cfg.N_step = static_cast<int>(f.get_int("campaign.N_step", cfg.N_step));
    cfg.workers = static_cast<int>(f.get_int("campaign.workers", cfg.workers));
    cfg.ranges.tumble_rate_max =
        f.get_double("campaign.tumble_rate_max_deg", 10.0) * std::numbers::pi / 180.0;
    if (f.has("campaign.A0")) {
      const auto r = f.get_array("campaign.A0", 2);
      cfg.ranges.A0 = {r[0], r[1]};
    }
    if (f.has("campaign.B0")) {
      const auto r = f.get_array("campaign.B0", 2);
      cfg.ranges.B0 = {r[0], r[1]};
    }
    cfg.trajectory_dir = f.get_string("campaign.trajectory_dir", "");
    try {
      cfg.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(0, e.what());
    }
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.message(), path);
  }
  if (f.has("campaign.scenario")) {
    std::filesystem::path sp = f.get_string("campaign.scenario");
    if (sp.is_relative()) sp = std::filesystem::path(path).parent_path() / sp;
    cfg.scenario = load_scenario_file(sp.string());
  }
  return cfg;
}

double CaseResult::tumble_rate_deg() const {
  return initial.target.omega.norm() * 180.0 / std::numbers::pi;
}

CaseResult n_search(std::uint64_t case_id, const InitialConditions& ic, const CampaignConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CaseResult res;
  res.case_id = case_id;
  res.initial = ic;
  Scenario s = cfg.scenario;
  s.chaser0 = ic.chaser;
  s.target0 = ic.target;

  try {
    const CaptureSetup setup(s, cfg.N_max);
    for (int N = cfg.N_min; N <= cfg.N_max; N += cfg.N_step) {
      const SolveReport rep = solve_capture(setup, N);
      ++res.solves_attempted;
      for (std::size_t i = 0; i < rep.solve_times.size(); ++i) {
        res.conic_solves.emplace_back(rep.solve_steps[i], rep.solve_times[i]);
      }
      if (rep.outcome == CaptureOutcome::numerical_failure) {
        ++res.numerical_failures;
        res.detail = "N=" + std::to_string(N) + ": " + rep.detail;
      }
      if (rep.outcome != CaptureOutcome::safe) continue;

      const VerificationReport v = verify_solution(setup, rep.trajectory);
      if (!v.all_satisfied()) {
        // Loose slack can admit a trajectory that breaks the original constraints.
        ++res.unverified_safe;
        const ResidualRow r = v.violations().front();
        res.detail = "N=" + std::to_string(N) + " failed verification: " + r.constraint + " at step " +
                     std::to_string(r.step);
        continue;
      }
      res.outcome = CaptureOutcome::safe;
      res.verified = true;
      res.N = N;
      res.scp_iterations = rep.iterations;
      res.delta_v = rep.delta_v;
      res.slack_sum_history = rep.slack_sum_history;
      res.off_fraction = off_fraction(rep.trajectory, s.limits.thrust_max);
      res.min_alpha = v.min_alpha;
      res.terminal_position_residual = v.terminal_position_residual;
      res.terminal_velocity_residual = v.terminal_velocity_residual;
      res.relaxation_tightness = v.relaxation_tightness;
      res.trajectory = rep.trajectory;
      break;
    }
  } catch (const std::exception& e) {
    res.outcome = CaptureOutcome::numerical_failure;
    res.detail = e.what();
    res.trajectory.reset();
  }
  if (res.outcome != CaptureOutcome::safe && res.outcome != CaptureOutcome::numerical_failure) {
    res.outcome = CaptureOutcome::infeasible_problem2;
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

InitialConditions campaign_case(const CampaignConfig& cfg, std::uint64_t case_id) {
  std::mt19937_64 rng = case_stream(cfg.seed, case_id);
  return sample_initial_conditions(rng, cfg.ranges, cfg.scenario.orbit);
}

CampaignSummary run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  CampaignSummary sum;
  sum.seed = cfg.seed;
  sum.cases.resize(static_cast<std::size_t>(cfg.n_samples));
  if (!cfg.trajectory_dir.empty()) std::filesystem::create_directories(cfg.trajectory_dir);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.n_samples; i = next++) {
      const auto id = static_cast<std::uint64_t>(i);
      CaseResult r = n_search(id, campaign_case(cfg, id), cfg);
      if (!cfg.trajectory_dir.empty() && r.trajectory) {
        const auto file = std::filesystem::path(cfg.trajectory_dir) / ("case_" + std::to_string(id) + ".csv");
        std::ofstream out(file);
        write_trajectory_csv(out, *r.trajectory, {});
      }
      sum.cases[static_cast<std::size_t>(i)] = std::move(r);
    }
  };
  const int n_threads = std::min(cfg.workers, std::max(cfg.n_samples, 1));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<double> all;
  std::vector<double> upto150;
  for (const CaseResult& c : sum.cases) {
    if (c.outcome == CaptureOutcome::safe) {
      ++sum.successes;
      ++sum.iteration_histogram[c.scp_iterations];
    }
    for (const auto& [N, t] : c.conic_solves) {
      all.push_back(t);
      if (N <= 150) upto150.push_back(t);
    }
  }
  sum.success_fraction =
      cfg.n_samples > 0 ? static_cast<double>(sum.successes) / static_cast<double>(cfg.n_samples) : 0.0;
  if (!all.empty()) sum.mean_solve_time = std::accumulate(all.begin(), all.end(), 0.0) / all.size();
  if (!upto150.empty()) {
    std::sort(upto150.begin(), upto150.end());
    const std::size_t m = upto150.size();
    sum.median_solve_time_upto_150 = m % 2 ? upto150[m / 2] : 0.5 * (upto150[m / 2 - 1] + upto150[m / 2]);
  }
  return sum;
}

void write_summary_csv(std::ostream& out, const CampaignSummary& s) {
  out << "case_id,tumble_rate_deg_s,initial_range_m,A0_m,B0_m,N,outcome,scp_iterations,delta_v_m_s,"
         "min_alpha,terminal_position_residual_m,terminal_velocity_residual_m_s,relaxation_tightness_m,"
         "off_fraction,verified,solves_attempted,unverified_safe\n";
  for (const CaseResult& c : s.cases) {
    out << c.case_id << ',' << num(c.tumble_rate_deg()) << ',' << num(c.initial_range()) << ','
        << num(c.initial.A0) << ',' << num(c.initial.B0) << ',' << c.N << ',' << to_string(c.outcome) << ','
        << c.scp_iterations << ',' << num(c.delta_v) << ',' << num(c.min_alpha) << ','
        << num(c.terminal_position_residual) << ',' << num(c.terminal_velocity_residual) << ','
        << num(c.relaxation_tightness) << ',' << num(c.off_fraction) << ',' << (c.verified ? 1 : 0) << ','
        << c.solves_attempted << ',' << c.unverified_safe << '\n';
  }
}

void write_timings_csv(std::ostream& out, const CampaignSummary& s) {
  out << "case_id,wall_time_s,conic_solves,mean_conic_solve_s\n";
  for (const CaseResult& c : s.cases) {
    double total = 0.0;
    for (const auto& [N, t] : c.conic_solves) total += t;
    const double mean = c.conic_solves.empty() ? 0.0 : total / c.conic_solves.size();
    out << c.case_id << ',' << num(c.wall_time) << ',' << c.conic_solves.size() << ',' << num(mean) << '\n';
  }
}

nlohmann::json aggregate_json(const CampaignSummary& s, const CampaignConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["rng"] = kCaseStreamAlgorithm;
  j["seed"] = s.seed;
  j["n_samples"] = cfg.n_samples;
  j["N_min"] = cfg.N_min;
  j["N_max"] = cfg.N_max;
  j["N_step"] = cfg.N_step;
  j["fov_form"] = to_string(cfg.scenario.fov_form);
  j["successes"] = s.successes;
  j["success_fraction"] = s.success_fraction;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [it, n] : s.iteration_histogram) hist[std::to_string(it)] = n;
  j["iteration_histogram"] = hist;
  int within5 = 0;
  int zero = 0;
  int verified = 0;
  int penalty_monotone = 0;
  int penalty_cases = 0;
  for (const CaseResult& c : s.cases) {
    if (c.outcome != CaptureOutcome::safe) continue;
    within5 += c.scp_iterations <= 5;
    zero += c.scp_iterations == 0;
    verified += c.verified;
    if (c.slack_sum_history.size() >= 2) {
      ++penalty_cases;
      bool mono = true;
      for (std::size_t i = 1; i < c.slack_sum_history.size(); ++i) {
        mono = mono && c.slack_sum_history[i] <= c.slack_sum_history[i - 1] + 1e-9;
      }
      penalty_monotone += mono;
    }
  }
  const double succ = std::max(s.successes, 1);
  j["fraction_within_5_iterations"] = within5 / succ;
  j["fraction_zero_iterations"] = zero / succ;
  j["verified_successes"] = verified;
  j["slack_monotone_fraction"] = penalty_cases ? static_cast<double>(penalty_monotone) / penalty_cases : 1.0;
  j["mean_conic_solve_time_s"] = s.mean_solve_time;
  j["median_conic_solve_time_s_N_le_150"] = s.median_solve_time_upto_150;
  return j;
}

}  // namespace softcap
