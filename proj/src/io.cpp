#include "softcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace softcap {

namespace {

constexpr int kColumns = 16;
constexpr const char* kHeader =
    "t,r_x,r_y,r_z,v_x,v_y,v_z,u_x,u_y,u_z,rho,alpha,q_s,q_x,q_y,q_z";

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& c, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("trajectory line " + std::to_string(line) + ": bad number '" + c + "'");
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const ChaserTrajectory& traj,
                          const std::vector<double>& alphas) {
  out << kHeader << '\n';
  const int N = traj.steps();
  for (int k = 0; k < N; ++k) {
    const ChaserState& x = traj.states[k];
    out << num(traj.dt * k);
    for (int i = 0; i < 3; ++i) out << ',' << num(x.r[i]);
    for (int i = 0; i < 3; ++i) out << ',' << num(x.v[i]);
    for (int i = 0; i < 3; ++i) {
      out << ',';
      if (k < static_cast<int>(traj.thrust.size())) out << num(traj.thrust[k][i]);
    }
    out << ',';
    if (k < static_cast<int>(traj.rho.size())) out << num(traj.rho[k]);
    out << ',';
    if (k < static_cast<int>(alphas.size())) out << num(alphas[k]);
    for (int i = 0; i < 4; ++i) {
      out << ',';
      if (k < static_cast<int>(traj.attitudes.size())) out << num(traj.attitudes[k].coeffs()[i]);
    }
    out << '\n';
  }
}

ChaserTrajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw InvalidInput("trajectory line 1: expected header '" + std::string(kHeader) + "'");
  }
  ChaserTrajectory traj;
  std::vector<double> times;
  bool rho_complete = true;
  bool thrust_missing_seen = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> c = split(line);
    if (static_cast<int>(c.size()) != kColumns) {
      throw InvalidInput("trajectory line " + std::to_string(lineno) + ": expected " +
                         std::to_string(kColumns) + " columns");
    }
    if (thrust_missing_seen) {
      throw InvalidInput("trajectory line " + std::to_string(lineno) + ": rows after the final node");
    }
    times.push_back(parse_cell(c[0], lineno));
    ChaserState x;
    for (int i = 0; i < 3; ++i) {
      x.r[i] = parse_cell(c[1 + i], lineno);
      x.v[i] = parse_cell(c[4 + i], lineno);
    }
    traj.states.push_back(x);
    if (c[7].empty() && c[8].empty() && c[9].empty()) {
      thrust_missing_seen = true;
    } else {
      traj.thrust.emplace_back(parse_cell(c[7], lineno), parse_cell(c[8], lineno),
                               parse_cell(c[9], lineno));
    }
    if (c[10].empty()) {
      rho_complete = false;
    } else {
      traj.rho.push_back(parse_cell(c[10], lineno));
    }
  }
  if (traj.states.size() < 2) throw InvalidInput("trajectory needs at least 2 rows");
  if (!thrust_missing_seen) throw InvalidInput("trajectory final row must have empty thrust");
  if (!rho_complete) traj.rho.clear();
  traj.dt = times[1] - times[0];
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - traj.dt * static_cast<double>(k)) > 1e-9 * (1.0 + times[k])) {
      throw InvalidInput("trajectory line " + std::to_string(k + 2) + ": nonuniform time grid");
    }
  }
  return traj;
}

ChaserTrajectory read_trajectory_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open trajectory '" + path + "'");
  return read_trajectory_csv(in);
}

nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["all_satisfied"] = rep.all_satisfied();
  j["max_dynamics_residual"] = rep.max_dynamics_residual;
  j["max_thrust"] = rep.max_thrust;
  j["max_velocity"] = rep.max_velocity;
  j["max_fov_angle"] = rep.max_fov_angle;
  j["terminal_position_residual"] = rep.terminal_position_residual;
  j["terminal_velocity_residual"] = rep.terminal_velocity_residual;
  j["min_alpha"] = rep.min_alpha;
  j["relaxation_tightness"] = rep.relaxation_tightness;
  j["delta_v"] = rep.delta_v;
  nlohmann::json v = nlohmann::json::array();
  for (const ResidualRow& r : rep.violations()) {
    v.push_back({{"constraint", r.constraint}, {"step", r.step}, {"value", r.value}, {"limit", r.limit}});
  }
  j["violations"] = v;
  return j;
}

nlohmann::json to_json(const SolveReport& rep, const Scenario& s) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["outcome"] = to_string(rep.outcome);
  j["detail"] = rep.detail;
  j["N"] = rep.steps;
  j["dt"] = s.dt;
  j["fov_form"] = to_string(s.fov_form);
  j["target_rate"] = s.target0.omega.norm();
  j["initial_range"] = s.chaser0.r.norm();
  j["scp_iterations"] = rep.iterations;
  j["alpha_min_history"] = rep.alpha_min_history;
  j["slack_sum_history"] = rep.slack_sum_history;
  j["correction_history"] = rep.correction_history;
  j["perturbed_linearizations"] = rep.perturbed_linearizations;
  j["delta_v"] = rep.delta_v;
  j["off_fraction"] = off_fraction(rep.trajectory, s.limits.thrust_max);
  j["solve_times"] = rep.solve_times;
  j["total_time"] = rep.total_time;
  return j;
}

}  // namespace softcap
