#pragma once

// Second-order cone program builder and the solver seam.
//
//   minimize    c'x + c0
//   subject to  sum_j a_ij x_j = b_i             (linear equalities)
//               lo_j <= x_j <= hi_j              (variable bounds)
//               x[members] in K                  (one cone per variable at most)
//
// K is either the nonnegative orthant or the second-order cone
// {(t, z) : ||z||_2 <= t} with members[0] as the head t.

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace softcap::conic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ConeKind { nonnegative, second_order };

struct Cone {
  ConeKind kind = ConeKind::nonnegative;
  std::vector<int> members;  // second_order: head first
};

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct LinearEquality {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
};

class ConicProgramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConicProgram {
 public:
  int add_variable(double cost = 0.0, double lo = -kInf, double hi = kInf);
  // Returns the first index of `count` consecutive free variables.
  int add_variables(int count);

  void set_cost(int var, double cost);
  void add_cost(int var, double cost);
  void set_bounds(int var, double lo, double hi);
  void fix(int var, double value) { set_bounds(var, value, value); }
  void add_objective_constant(double c) { objective_constant_ += c; }

  int add_equality(std::vector<LinearTerm> terms, double rhs);
  int add_nonnegative(std::span<const int> vars);
  // Enforces ||x[tail]||_2 <= x[head]; an empty tail gives x[head] >= 0.
  // Throws ConicProgramError if any index is out of range or already in a cone.
  int add_soc(int head, std::span<const int> tail);

  int num_variables() const { return static_cast<int>(cost_.size()); }
  const std::vector<double>& cost() const { return cost_; }
  double objective_constant() const { return objective_constant_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LinearEquality>& equalities() const { return equalities_; }
  const std::vector<Cone>& cones() const { return cones_; }

  // Dimension and finiteness checks; throws ConicProgramError.
  void validate() const;

  double objective_value(std::span<const double> x) const;

  // Line-oriented text listing, 17 significant digits:
  //   conic-program 1
  //   variables <n>
  //   constant <c0>
  //   cost <var> <c>
  //   bound <var> <lo> <hi>          (inf / -inf allowed)
  //   eq <rhs> <var>:<coef> ...
  //   nonneg <var> ...
  //   soc <head> <tail> ...
  //   end
  std::string dump() const;
  static ConicProgram parse(std::string_view text);

  friend bool operator==(const ConicProgram& a, const ConicProgram& b);

 private:
  void check_index(int var) const;
  void claim(int var);

  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> in_cone_;
  std::vector<LinearEquality> equalities_;
  std::vector<Cone> cones_;
  double objective_constant_ = 0.0;
};

bool operator==(const LinearTerm& a, const LinearTerm& b);
bool operator==(const LinearEquality& a, const LinearEquality& b);
bool operator==(const Cone& a, const Cone& b);

// Adds t_j >= |u_j| for every index in u through t - u >= 0 and t + u >= 0,
// and weight * sum t_j to the objective. Returns the t indices.
std::vector<int> l1_epigraph(ConicProgram& prog, std::span<const int> u,
                             double weight = 1.0);

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };

const char* to_string(SolveStatus s);

struct SolverSettings {
  double tolerance = 1e-8;  // feasibility and optimality
  int max_iterations = 100;
};

struct SolverOutcome {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<double> primal;  // present iff status == optimal
  double objective = 0.0;
  double solve_time = 0.0;     // s, wall clock of the backend call
  int iterations = 0;
  bool reduced_accuracy = false;
  std::string diagnostics;
};

SolverOutcome solve(const ConicProgram& prog, const SolverSettings& settings = {});

}  // namespace softcap::conic
