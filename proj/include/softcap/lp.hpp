#pragma once

// Small dense linear programs: min c'x subject to G x <= h, x free.
// Solved through the standard-form dual (min h'lambda, G'lambda = -c,
// lambda >= 0) with a two-phase tableau simplex and Bland's rule, so the
// optimal multipliers come out exactly at a vertex.

#include <vector>

#include <Eigen/Core>

namespace softcap::lp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct InequalityLpResult {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;       // primal minimizer
  Eigen::VectorXd lambda;  // multipliers of G x <= h, lambda >= 0
  double objective = 0.0;
  std::vector<int> tight;  // rows with slack below the activity tolerance
  int pivots = 0;
};

// Tolerances are relative to the magnitude of the data.
InequalityLpResult solve_inequality_lp(const Eigen::MatrixXd& G,
                                       const Eigen::VectorXd& h,
                                       const Eigen::VectorXd& c,
                                       double activity_tol = 1e-9);

const char* to_string(LpStatus s);

}  // namespace softcap::lp
