#include "softcap/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "softcap/harness.hpp"
#include "softcap/io.hpp"

namespace softcap {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct SearchRange {
  int N_min = 40;
  int N_max = 350;
  int N_step = 10;
};

struct SolveOptions {
  std::string scenario;
  std::string out_dir = ".";
  int N = 0;
  bool search = false;
  SearchRange range;
  std::string fov;
  bool allow_fast_tumble = false;
};

struct CampaignOptions {
  std::string config;
  std::string out_dir = ".";
  int samples = -1;
  long long seed = -1;
  int workers = 0;
  int N_min = 0;
  int N_max = 0;
  int N_step = 0;
  bool save_trajectories = false;
};

struct VerifyOptions {
  std::string scenario;
  std::string trajectory;
  std::string out;
};

struct PlotOptions {
  std::string scenario;
  std::string summary;
  std::string out_dir = ".";
  int N = 0;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw InvalidInput("cannot write '" + p.string() + "'");
  f << text;
}

Scenario scenario_with_overrides(const SolveOptions& o) {
  Scenario s = load_scenario_file(o.scenario);
  if (!o.fov.empty()) s.fov_form = fov_form_from_string(o.fov);
  if (o.allow_fast_tumble) s.enforce_tumble_bound = false;
  if (o.N > 0) s.steps = o.N;
  return s;
}

// One solve at the scenario N, or the first safe N of the search range.
struct Solved {
  SolveReport report;
  std::shared_ptr<CaptureSetup> setup;
  std::optional<VerificationReport> verification;  // safe outcomes only

  bool accepted() const { return verification && verification->all_satisfied(); }
};

void check(Solved& r) {
  r.verification.reset();
  if (r.report.outcome == CaptureOutcome::safe) {
    r.verification = verify_solution(*r.setup, r.report.trajectory);
  }
}

Solved solve_scenario(const Scenario& s, bool search, const SearchRange& range) {
  Solved r;
  if (!search) {
    r.setup = std::make_shared<CaptureSetup>(s, s.steps);
    r.report = solve_capture(*r.setup, s.steps);
    check(r);
    return r;
  }
  if (!(range.N_min >= 2 && range.N_min < range.N_max && range.N_step > 0)) {
    throw InvalidInput("need 2 <= n-min < n-max and n-step > 0");
  }
  r.setup = std::make_shared<CaptureSetup>(s, range.N_max);
  for (int N = range.N_min; N <= range.N_max; N += range.N_step) {
    r.report = solve_capture(*r.setup, N);
    check(r);
    if (r.accepted()) break;
  }
  return r;
}

int exit_code(CaptureOutcome o) {
  switch (o) {
    case CaptureOutcome::safe: return kExitOk;
    case CaptureOutcome::infeasible_problem2:
    case CaptureOutcome::scp_exhausted: return kExitInfeasible;
    case CaptureOutcome::numerical_failure: return kExitError;
  }
  return kExitError;
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const Scenario s = scenario_with_overrides(o);
  const Solved r = solve_scenario(s, o.search, o.range);
  const SolveReport& rep = r.report;
  fs::create_directories(o.out_dir);
  nlohmann::json j = to_json(rep, s);
  if (r.verification) {
    j["verification"] = to_json(*r.verification);
    std::ofstream csv(fs::path(o.out_dir) / "trajectory.csv");
    write_trajectory_csv(csv, rep.trajectory, rep.alpha_history.back());
  }
  if (!rep.repro_dump.empty()) {
    write_file(fs::path(o.out_dir) / "failed_program.txt", rep.repro_dump);
    err << "conic program written to " << (fs::path(o.out_dir) / "failed_program.txt").string() << "\n";
  }
  write_file(fs::path(o.out_dir) / "report.json", j.dump(2) + "\n");
  out << to_string(rep.outcome) << " N=" << rep.steps << " iterations=" << rep.iterations
      << " delta_v=" << rep.delta_v << " m/s";
  if (!rep.detail.empty()) out << " (" << rep.detail << ")";
  out << "\n";
  if (r.verification && !r.accepted()) {
    for (const ResidualRow& v : r.verification->violations()) {
      out << "violation " << v.constraint << " step " << v.step << ": " << v.value << " > " << v.limit << "\n";
    }
    return kExitInfeasible;
  }
  return exit_code(rep.outcome);
}

int cmd_campaign(const CampaignOptions& o, std::ostream& out) {
  CampaignConfig cfg = o.config.empty() ? CampaignConfig{} : load_campaign_file(o.config);
  if (o.samples >= 0) cfg.n_samples = o.samples;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.N_min > 0) cfg.N_min = o.N_min;
  if (o.N_max > 0) cfg.N_max = o.N_max;
  if (o.N_step > 0) cfg.N_step = o.N_step;
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  if (o.save_trajectories) cfg.trajectory_dir = (dir / "trajectories").string();
  const CampaignSummary sum = run_campaign(cfg);
  {
    std::ofstream f(dir / "summary.csv");
    write_summary_csv(f, sum);
  }
  {
    std::ofstream f(dir / "timings.csv");
    write_timings_csv(f, sum);
  }
  write_file(dir / "aggregate.json", aggregate_json(sum, cfg).dump(2) + "\n");
  out << "successes " << sum.successes << "/" << cfg.n_samples << " (" << sum.success_fraction << ")\n";
  return kExitOk;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const Scenario s = load_scenario_file(o.scenario);
  const ChaserTrajectory traj = read_trajectory_csv_file(o.trajectory);
  const CaptureSetup setup(s, traj.steps());
  const VerificationReport v = verify_solution(setup, traj);
  out << "constraint,step,value,limit\n";
  for (const ResidualRow& r : v.violations()) {
    out << r.constraint << ',' << r.step << ',' << r.value << ',' << r.limit << "\n";
  }
  out << "min_alpha " << v.min_alpha << "\nterminal_position_residual " << v.terminal_position_residual
      << "\nterminal_velocity_residual " << v.terminal_velocity_residual << "\nmax_dynamics_residual "
      << v.max_dynamics_residual << "\nrelaxation_tightness " << v.relaxation_tightness << "\ndelta_v "
      << v.delta_v << "\n" << (v.all_satisfied() ? "all constraints satisfied" : "violations found") << "\n";
  if (!o.out.empty()) write_file(o.out, to_json(v).dump(2) + "\n");
  return v.all_satisfied() ? kExitOk : kExitInfeasible;
}

int cmd_plotdata(const PlotOptions& o, std::ostream& out) {
  if (o.scenario.empty() && o.summary.empty()) {
    throw InvalidInput("plotdata needs --scenario and/or --summary");
  }
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  int code = kExitOk;
  if (!o.scenario.empty()) {
    Scenario s = load_scenario_file(o.scenario);
    if (o.N > 0) s.steps = o.N;
    const Solved r = solve_scenario(s, false, {});
    const SolveReport& rep = r.report;
    code = exit_code(rep.outcome);
    std::ofstream thrust(dir / "thrust.csv");
    thrust << "t,problem2_u_x,problem2_u_y,problem2_u_z,problem2_u_norm,final_u_x,final_u_y,final_u_z,"
              "final_u_norm\n";
    const auto& a = rep.initial_trajectory.thrust;
    const auto& b = rep.trajectory.thrust;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const Vec3 ua = k < a.size() ? a[k] : Vec3::Zero();
      thrust << s.dt * k << ',' << ua.x() << ',' << ua.y() << ',' << ua.z() << ',' << ua.norm() << ','
             << b[k].x() << ',' << b[k].y() << ',' << b[k].z() << ',' << b[k].norm() << '\n';
    }
    std::ofstream alpha(dir / "alpha_history.csv");
    alpha << "iteration,step,t,alpha\n";
    for (std::size_t it = 0; it < rep.alpha_history.size(); ++it) {
      for (std::size_t k = 0; k < rep.alpha_history[it].size(); ++k) {
        alpha << it << ',' << k << ',' << s.dt * k << ',' << rep.alpha_history[it][k] << '\n';
      }
    }
    if (!rep.trajectory.states.empty()) {
      std::ofstream traj(dir / "trajectory.csv");
      write_trajectory_csv(traj, rep.trajectory, rep.alpha_history.empty() ? std::vector<double>{}
                                                                           : rep.alpha_history.back());
      std::ofstream tumble(dir / "target_tumble.csv");
      r.setup->tumble().write_csv(tumble);
    }
    out << "scenario " << to_string(rep.outcome) << ": thrust.csv, alpha_history.csv written\n";
  }
  if (!o.summary.empty()) {
    std::ifstream in(o.summary);
    if (!in) throw InvalidInput("cannot open summary '" + o.summary + "'");
    std::ofstream scatter(dir / "success_scatter.csv");
    scatter << "tumble_rate_deg_s,initial_range_m,N,success\n";
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> c;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) c.push_back(cell);
      if (c.size() < 7) continue;
      scatter << c[1] << ',' << c[2] << ',' << c[5] << ',' << (c[6] == "safe" ? 1 : 0) << '\n';
    }
    out << "success_scatter.csv written\n";
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-fuel soft capture of a tumbling target"};
  app.require_subcommand(1);

  SolveOptions so;
  CLI::App* solve = app.add_subcommand("solve", "Solve one scenario; writes trajectory.csv and report.json");
  solve->add_option("scenario", so.scenario, "Scenario file")->required();
  solve->add_option("-o,--out", so.out_dir, "Output directory");
  solve->add_option("--N", so.N, "Override the number of nodes");
  solve->add_flag("--search", so.search, "Search N from --n-min to --n-max");
  solve->add_option("--n-min", so.range.N_min, "Smallest N of the search");
  solve->add_option("--n-max", so.range.N_max, "Largest N of the search");
  solve->add_option("--n-step", so.range.N_step, "N increment of the search");
  solve->add_option("--fov", so.fov, "Field-of-view form: corrected or literal");
  solve->add_flag("--allow-fast-tumble", so.allow_fast_tumble, "Skip the tumble-rate feasibility bound");

  CampaignOptions co;
  CLI::App* campaign = app.add_subcommand("campaign", "Monte Carlo campaign; writes summary.csv and aggregate.json");
  campaign->add_option("config", co.config, "Campaign file");
  campaign->add_option("-o,--out", co.out_dir, "Output directory");
  campaign->add_option("--samples", co.samples, "Number of sampled cases");
  campaign->add_option("--seed", co.seed, "Campaign seed");
  campaign->add_option("--workers", co.workers, "Worker threads");
  campaign->add_option("--n-min", co.N_min, "Smallest N of the search");
  campaign->add_option("--n-max", co.N_max, "Largest N of the search");
  campaign->add_option("--n-step", co.N_step, "N increment of the search");
  campaign->add_flag("--save-trajectories", co.save_trajectories, "Write a trajectory CSV per success");

  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "Check a trajectory against the nonconvex constraints");
  verify->add_option("scenario", vo.scenario, "Scenario file")->required();
  verify->add_option("trajectory", vo.trajectory, "Trajectory CSV")->required();
  verify->add_option("--json", vo.out, "Write the report as JSON");

  PlotOptions po;
  CLI::App* plot = app.add_subcommand("plotdata", "Emit thrust, alpha-history and success-scatter data");
  plot->add_option("--scenario", po.scenario, "Scenario to solve");
  plot->add_option("--N", po.N, "Override the number of nodes");
  plot->add_option("--summary", po.summary, "Campaign summary.csv");
  plot->add_option("-o,--out", po.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return cmd_solve(so, out, err);
    if (*campaign) return cmd_campaign(co, out);
    if (*verify) return cmd_verify(vo, out);
    if (*plot) return cmd_plotdata(po, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace softcap
