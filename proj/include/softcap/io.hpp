#pragma once

// Trajectory CSV and JSON reports.

#include <iosfwd>
#include <string>

#include "softcap/capture.hpp"
#include "json.hpp"

namespace softcap {

inline constexpr int kReportSchemaVersion = 1;

// Columns: t, r_x..r_z, v_x..v_z, u_x..u_z, rho, alpha, q_s..q_z.
// The last node has empty thrust cells; rho, alpha and q may be empty.
// alphas and attitudes may be empty.
void write_trajectory_csv(std::ostream& out, const ChaserTrajectory& traj,
                          const std::vector<double>& alphas);
// Throws InvalidInput with the offending line number.
ChaserTrajectory read_trajectory_csv(std::istream& in);
ChaserTrajectory read_trajectory_csv_file(const std::string& path);

nlohmann::json to_json(const VerificationReport& rep);
nlohmann::json to_json(const SolveReport& rep, const Scenario& s);

}  // namespace softcap
