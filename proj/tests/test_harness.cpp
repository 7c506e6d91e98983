#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "softcap/cli.hpp"
#include "softcap/harness.hpp"
#include "softcap/io.hpp"

using namespace softcap;
namespace fs = std::filesystem;

namespace {

const std::string kScenarios = std::string(SOFTCAP_SOURCE_DIR) + "/scenarios/";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("softcap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "softcap");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

CampaignConfig small_campaign(int samples, int workers) {
  CampaignConfig cfg;
  cfg.n_samples = samples;
  cfg.seed = 7;
  cfg.N_max = 150;
  cfg.workers = workers;
  return cfg;
}

bool accepted(const CaptureSetup& setup, int N) {
  const SolveReport r = solve_capture(setup, N);
  return r.outcome == CaptureOutcome::safe && verify_solution(setup, r.trajectory).all_satisfied();
}

}  // namespace

TEST_CASE("campaign results do not depend on the worker count") {
  const CampaignSummary a = run_campaign(small_campaign(4, 1));
  const CampaignSummary b = run_campaign(small_campaign(4, 3));
  std::ostringstream sa, sb;
  write_summary_csv(sa, a);
  write_summary_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(a.successes == b.successes);
  CHECK(a.success_fraction == static_cast<double>(a.successes) / 4.0);
}

TEST_CASE("case streams are independent of order") {
  CampaignConfig cfg;
  cfg.seed = 123;
  const InitialConditions late = campaign_case(cfg, 9);
  (void)campaign_case(cfg, 3);
  const InitialConditions again = campaign_case(cfg, 9);
  CHECK(late.chaser.r == again.chaser.r);
  CHECK(late.target.omega == again.target.omega);
  CHECK(campaign_case(cfg, 8).chaser.r != late.chaser.r);
}

TEST_CASE("search stops at the first safe horizon") {
  CampaignConfig cfg = small_campaign(1, 1);
  const CaseResult r = n_search(8, campaign_case(cfg, 8), cfg);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  CHECK(r.N == cfg.N_min);
  CHECK(r.solves_attempted == 1);
  CHECK(r.verified);
}

TEST_CASE("search result is within one increment of an exhaustive scan") {
  CampaignConfig cfg = small_campaign(1, 1);
  for (std::uint64_t id : {0u, 3u, 5u}) {
    const InitialConditions ic = campaign_case(cfg, id);
    const CaseResult r = n_search(id, ic, cfg);
    REQUIRE(r.outcome == CaptureOutcome::safe);
    Scenario s = cfg.scenario;
    s.chaser0 = ic.chaser;
    s.target0 = ic.target;
    const CaptureSetup setup(s, cfg.N_max);
    int smallest = 0;
    for (int N = cfg.N_min; N <= r.N; ++N) {
      if (accepted(setup, N)) {
        smallest = N;
        break;
      }
    }
    REQUIRE(smallest > 0);
    CHECK(r.N >= smallest);
    CHECK(r.N - smallest < cfg.N_step);
  }
}

TEST_CASE("tumble above the rate bound is infeasible at every horizon") {
  CampaignConfig cfg = small_campaign(1, 1);
  InitialConditions ic = campaign_case(cfg, 0);
  ic.target.omega = Vec3(0.0, 15.0, 0.0) * std::numbers::pi / 180.0;
  const CaseResult r = n_search(0, ic, cfg);
  CHECK(r.outcome == CaptureOutcome::infeasible_problem2);
  CHECK(r.N == 0);
  CHECK(r.solves_attempted == (cfg.N_max - cfg.N_min) / cfg.N_step + 1);
  CHECK(r.conic_solves.empty());
}

TEST_CASE("trajectory CSV round trip") {
  const Scenario s = load_scenario_file(kScenarios + "reference.toml");
  const CaptureSetup setup(s, s.steps);
  const SolveReport r = solve_capture(setup, s.steps);
  REQUIRE(r.outcome == CaptureOutcome::safe);
  std::stringstream io;
  write_trajectory_csv(io, r.trajectory, r.alpha_history.back());
  const ChaserTrajectory t = read_trajectory_csv(io);
  REQUIRE(t.steps() == r.trajectory.steps());
  for (int k = 0; k < t.steps(); ++k) {
    CHECK(t.states[k].r == r.trajectory.states[k].r);
    CHECK(t.states[k].v == r.trajectory.states[k].v);
    CHECK(t.rho[k] == r.trajectory.rho[k]);
  }
  for (std::size_t k = 0; k < t.thrust.size(); ++k) CHECK(t.thrust[k] == r.trajectory.thrust[k]);
  CHECK(std::abs(delta_v(t, s.orbit.chaser_mass) - r.delta_v) <= 1e-9);

  std::istringstream bad("t,r_x\n0,1\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad), InvalidInput);
}

TEST_CASE("cli solve and verify on the pinned scenario") {
  const fs::path dir = scratch("solve");
  std::string out;
  CHECK(cli({"solve", kScenarios + "reference.toml", "-o", dir.string()}, &out) == 0);
  CHECK(out.rfind("safe", 0) == 0);
  CHECK(fs::exists(dir / "trajectory.csv"));
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["outcome"] == "safe");
  CHECK(report["schema_version"] == kReportSchemaVersion);
  CHECK(report["verification"]["all_satisfied"] == true);

  CHECK(cli({"verify", kScenarios + "reference.toml", (dir / "trajectory.csv").string()}, &out) == 0);
  CHECK(out.find("all constraints satisfied") != std::string::npos);

  // Push one node past the speed limit.
  std::ifstream in(dir / "trajectory.csv");
  std::ostringstream edited;
  std::string line;
  for (int i = 0; std::getline(in, line); ++i) {
    if (i == 31) {
      std::vector<std::string> c;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) c.push_back(cell);
      c[4] = "2.0";
      line.clear();
      for (std::size_t j = 0; j < c.size(); ++j) line += (j ? "," : "") + c[j];
    }
    edited << line << '\n';
  }
  std::ofstream(dir / "tampered.csv") << edited.str();
  CHECK(cli({"verify", kScenarios + "reference.toml", (dir / "tampered.csv").string()}, &out) == 2);
  CHECK(out.find("velocity,30,") != std::string::npos);
}

TEST_CASE("cli reports infeasible capture with exit code 2") {
  const fs::path dir = scratch("fast");
  std::string out;
  CHECK(cli({"solve", kScenarios + "fast_tumble.toml", "--search", "-o", dir.string()}, &out) == 2);
  CHECK(out.rfind("infeasible-problem2", 0) == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
}

TEST_CASE("cli rejects a malformed scenario with its line") {
  const fs::path dir = scratch("malformed");
  std::ofstream(dir / "bad.toml") << "[limits]\nU_max = 100\nv_max = fast\n";
  std::string out, err;
  CHECK(cli({"solve", (dir / "bad.toml").string()}, &out, &err) == 1);
  CHECK(err.find("bad.toml:3:") != std::string::npos);
  CHECK(cli({"solve", (dir / "missing.toml").string()}, &out, &err) == 1);
  CHECK(cli({"frobnicate"}, &out, &err) == 1);
}

TEST_CASE("cli campaign output is byte-identical across runs") {
  const fs::path a = scratch("campaign_a");
  const fs::path b = scratch("campaign_b");
  CHECK(cli({"campaign", "--samples", "5", "--seed", "7", "-o", a.string()}) == 0);
  CHECK(cli({"campaign", "--samples", "5", "--seed", "7", "--workers", "2", "-o", b.string()}) == 0);
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  const std::string summary = slurp(a / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 6);
  const nlohmann::json agg = nlohmann::json::parse(slurp(a / "aggregate.json"));
  CHECK(agg["seed"] == 7);
  CHECK(agg["rng"] == kCaseStreamAlgorithm);

  const fs::path plots = scratch("plots");
  CHECK(cli({"plotdata", "--summary", (a / "summary.csv").string(), "--scenario", kScenarios + "reference.toml",
             "-o", plots.string()}) == 0);
  for (const char* f : {"thrust.csv", "alpha_history.csv", "success_scatter.csv", "trajectory.csv"}) {
    CHECK(fs::exists(plots / f));
  }
}

TEST_CASE("campaign file loading") {
  const CampaignConfig cfg = load_campaign_file(kScenarios + "campaign.toml");
  CHECK(cfg.n_samples == 250);
  CHECK(cfg.N_min == 40);
  CHECK(cfg.N_max == 350);
  CHECK(cfg.N_step == 10);
  CHECK(cfg.scenario.steps == 100);
  CampaignConfig bad;
  bad.N_min = 400;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
