// ECOS backend for conic::solve. Fixed variables and singleton equality rows
// are substituted out before the interior-point call; everything else is
// passed through in the program's own (canonical) order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "softcap/conic.hpp"

extern "C" {
#include "ecos.h"
}

namespace softcap::conic {

namespace {

struct Presolved {
  std::vector<bool> fixed;
  std::vector<double> value;
  bool infeasible = false;
  std::string reason;
};

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

Presolved presolve(const ConicProgram& prog, double tol) {
  const int n = prog.num_variables();
  Presolved ps;
  ps.fixed.assign(n, false);
  ps.value.assign(n, 0.0);

  auto fix = [&](int j, double v, const char* why) {
    if (ps.fixed[j]) {
      if (!close(ps.value[j], v, tol)) {
        ps.infeasible = true;
        ps.reason = std::string("conflicting fixings of variable ") + std::to_string(j) +
                    " (" + why + ")";
      }
      return false;
    }
    ps.fixed[j] = true;
    ps.value[j] = v;
    return true;
  };

  for (int j = 0; j < n; ++j) {
    if (prog.lower()[j] == prog.upper()[j]) fix(j, prog.lower()[j], "bounds");
  }

  bool changed = true;
  while (changed && !ps.infeasible) {
    changed = false;
    for (const LinearEquality& e : prog.equalities()) {
      int free_var = -1;
      int free_count = 0;
      double free_coef = 0.0;
      double rhs = e.rhs;
      // Combine repeated indices before deciding whether the row is a singleton.
      std::vector<std::pair<int, double>> merged;
      for (const LinearTerm& t : e.terms) {
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const auto& p) { return p.first == t.var; });
        if (it == merged.end()) merged.emplace_back(t.var, t.coef);
        else it->second += t.coef;
      }
      for (const auto& [var, coef] : merged) {
        if (coef == 0.0) continue;
        if (ps.fixed[var]) {
          rhs -= coef * ps.value[var];
        } else {
          ++free_count;
          free_var = var;
          free_coef = coef;
        }
      }
      if (free_count == 1) {
        changed |= fix(free_var, rhs / free_coef, "singleton equality");
      } else if (free_count == 0 && std::abs(rhs) > tol * std::max(1.0, std::abs(e.rhs))) {
        ps.infeasible = true;
        ps.reason = "equality row reduces to 0 = " + std::to_string(rhs);
      }
      if (ps.infeasible) break;
    }
    for (const Cone& c : prog.cones()) {
      if (c.kind != ConeKind::second_order || !ps.fixed[c.members[0]]) continue;
      const double head = ps.value[c.members[0]];
      if (head < -tol) {
        ps.infeasible = true;
        ps.reason = "second-order cone head fixed negative";
        break;
      }
      if (std::abs(head) <= tol) {
        for (std::size_t i = 1; i < c.members.size(); ++i) {
          changed |= fix(c.members[i], 0.0, "zero cone head");
        }
      }
    }
  }
  if (ps.infeasible) return ps;

  for (int j = 0; j < n; ++j) {
    if (!ps.fixed[j]) continue;
    const double v = ps.value[j];
    if (v < prog.lower()[j] - tol * std::max(1.0, std::abs(v)) ||
        v > prog.upper()[j] + tol * std::max(1.0, std::abs(v))) {
      ps.infeasible = true;
      ps.reason = "fixed value of variable " + std::to_string(j) + " violates its bounds";
      return ps;
    }
  }
  for (const Cone& c : prog.cones()) {
    if (c.kind == ConeKind::nonnegative) {
      for (int v : c.members) {
        if (ps.fixed[v] && ps.value[v] < -tol) {
          ps.infeasible = true;
          ps.reason = "fixed variable violates nonnegativity";
          return ps;
        }
      }
      continue;
    }
    bool all_fixed = true;
    for (int v : c.members) all_fixed &= ps.fixed[v];
    if (all_fixed) {
      double tail = 0.0;
      for (std::size_t i = 1; i < c.members.size(); ++i) {
        tail += ps.value[c.members[i]] * ps.value[c.members[i]];
      }
      if (std::sqrt(tail) > ps.value[c.members[0]] + tol) {
        ps.infeasible = true;
        ps.reason = "fixed variables violate a second-order cone";
        return ps;
      }
    }
  }
  return ps;
}

struct Triplet {
  long row;
  long col;
  double val;
};

// Column-compressed storage in the layout ECOS expects.
struct Csc {
  std::vector<double> pr;
  std::vector<idxint> jc;
  std::vector<idxint> ir;
};

Csc to_csc(std::vector<Triplet> t, long cols) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  Csc m;
  m.jc.assign(cols + 1, 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!m.ir.empty() && k > 0 && t[k].col == t[k - 1].col && t[k].row == t[k - 1].row) {
      m.pr.back() += t[k].val;
      continue;
    }
    m.pr.push_back(t[k].val);
    m.ir.push_back(t[k].row);
    ++m.jc[t[k].col + 1];
  }
  for (long j = 0; j < cols; ++j) m.jc[j + 1] += m.jc[j];
  return m;
}

SolverOutcome finish(const ConicProgram& prog, SolveStatus status, std::vector<double> x,
                     std::string diag) {
  SolverOutcome out;
  out.status = status;
  out.diagnostics = std::move(diag);
  if (status == SolveStatus::optimal) {
    out.objective = prog.objective_value(x);
    out.primal = std::move(x);
  }
  return out;
}

}  // namespace

SolverOutcome solve(const ConicProgram& prog, const SolverSettings& settings) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  prog.validate();
  const double tol = std::max(settings.tolerance, 1e-12);

  const Presolved ps = presolve(prog, 1e-9);
  if (ps.infeasible) {
    SolverOutcome out = finish(prog, SolveStatus::infeasible, {}, "presolve: " + ps.reason);
    out.solve_time = std::chrono::duration<double>(clock::now() - t0).count();
    return out;
  }

  const int n_all = prog.num_variables();
  std::vector<bool> appears(n_all, false);
  for (const LinearEquality& e : prog.equalities()) {
    for (const LinearTerm& t : e.terms) {
      if (t.coef != 0.0) appears[t.var] = true;
    }
  }
  for (const Cone& c : prog.cones()) {
    for (int v : c.members) appears[v] = true;
  }
  for (int j = 0; j < n_all; ++j) {
    if (prog.lower()[j] != -kInf || prog.upper()[j] != kInf) appears[j] = true;
  }

  std::vector<long> column(n_all, -1);
  long n = 0;
  std::vector<double> x_full(ps.value);
  for (int j = 0; j < n_all; ++j) {
    if (ps.fixed[j]) continue;
    if (!appears[j]) {
      if (prog.cost()[j] != 0.0) {
        return finish(prog, SolveStatus::unbounded, {},
                      "presolve: unconstrained variable " + std::to_string(j) + " with nonzero cost");
      }
      x_full[j] = 0.0;
      continue;
    }
    column[j] = n++;
  }

  // Equalities with fixed variables moved to the right-hand side.
  std::vector<Triplet> a_trip;
  std::vector<double> b;
  for (const LinearEquality& e : prog.equalities()) {
    double rhs = e.rhs;
    std::vector<Triplet> row;
    for (const LinearTerm& t : e.terms) {
      if (t.coef == 0.0) continue;
      if (ps.fixed[t.var]) rhs -= t.coef * ps.value[t.var];
      else row.push_back({static_cast<long>(b.size()), column[t.var], t.coef});
    }
    // Singletons were turned into fixings; empty rows were checked.
    if (row.size() <= 1) {
      bool all_fixed = true;
      for (const LinearTerm& t : e.terms) all_fixed &= (t.coef == 0.0 || ps.fixed[t.var]);
      if (all_fixed) continue;
    }
    a_trip.insert(a_trip.end(), row.begin(), row.end());
    b.push_back(rhs);
  }

  // Cone rows: s = h - G x.
  std::vector<Triplet> g_trip;
  std::vector<double> h;
  auto lp_row = [&](long col, double coef, double rhs) {
    g_trip.push_back({static_cast<long>(h.size()), col, coef});
    h.push_back(rhs);
  };
  for (int j = 0; j < n_all; ++j) {
    if (column[j] < 0) continue;
    if (prog.lower()[j] != -kInf) lp_row(column[j], -1.0, -prog.lower()[j]);
    if (prog.upper()[j] != kInf) lp_row(column[j], 1.0, prog.upper()[j]);
  }
  for (const Cone& c : prog.cones()) {
    if (c.kind != ConeKind::nonnegative) continue;
    for (int v : c.members) {
      if (column[v] >= 0) lp_row(column[v], -1.0, 0.0);
    }
  }
  auto live = [&](const Cone& c) {
    return std::any_of(c.members.begin(), c.members.end(),
                       [&](int v) { return column[v] >= 0; });
  };
  for (const Cone& c : prog.cones()) {
    if (c.kind == ConeKind::second_order && c.members.size() == 1 && live(c)) {
      lp_row(column[c.members[0]], -1.0, 0.0);
    }
  }
  const long l_total = static_cast<long>(h.size());
  std::vector<idxint> q;
  for (const Cone& c : prog.cones()) {
    if (c.kind != ConeKind::second_order || c.members.size() == 1 || !live(c)) continue;
    q.push_back(static_cast<idxint>(c.members.size()));
    for (int v : c.members) {
      if (column[v] >= 0) {
        g_trip.push_back({static_cast<long>(h.size()), column[v], -1.0});
        h.push_back(0.0);
      } else {
        h.push_back(ps.value[v]);
      }
    }
  }

  std::vector<double> c(n, 0.0);
  for (int j = 0; j < n_all; ++j) {
    if (column[j] >= 0) c[column[j]] = prog.cost()[j];
  }

  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  if (n == 0) {
    SolverOutcome out = finish(prog, SolveStatus::optimal, x_full, "presolve: all variables fixed");
    out.solve_time = elapsed();
    return out;
  }

  const long m = static_cast<long>(h.size());
  const long p = static_cast<long>(b.size());

  if (m == 0) {
    // Equality-constrained linear objective: optimal iff consistent and c lies
    // in the row space of A.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, n);
    for (const Triplet& t : a_trip) A(t.row, t.col) += t.val;
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), p);
    const Eigen::Map<const Eigen::VectorXd> cv(c.data(), n);
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(bv);
    SolverOutcome out;
    if (p > 0 && (A * x - bv).norm() > 1e-9 * std::max(1.0, bv.norm())) {
      out = finish(prog, SolveStatus::infeasible, {}, "inconsistent equalities");
    } else {
      const Eigen::VectorXd y = A.transpose().colPivHouseholderQr().solve(cv);
      if (p == 0 ? cv.norm() > 0.0 : (A.transpose() * y - cv).norm() > 1e-9 * std::max(1.0, cv.norm())) {
        out = finish(prog, SolveStatus::unbounded, {}, "objective not bounded on the affine set");
      } else {
        for (int j = 0; j < n_all; ++j) {
          if (column[j] >= 0) x_full[j] = p > 0 ? x[column[j]] : 0.0;
        }
        out = finish(prog, SolveStatus::optimal, x_full, "equality-only program");
      }
    }
    out.solve_time = elapsed();
    return out;
  }

  Csc G = to_csc(g_trip, n);
  Csc A = to_csc(a_trip, n);

  pwork* work = ECOS_setup(n, m, p, l_total, static_cast<idxint>(q.size()),
                           q.empty() ? nullptr : q.data(), 0, G.pr.data(), G.jc.data(),
                           G.ir.data(), p > 0 ? A.pr.data() : nullptr,
                           p > 0 ? A.jc.data() : nullptr, p > 0 ? A.ir.data() : nullptr,
                           c.data(), h.data(), p > 0 ? b.data() : nullptr);
  if (work == nullptr) {
    SolverOutcome out = finish(prog, SolveStatus::numerical_failure, {}, "ECOS_setup failed");
    out.solve_time = elapsed();
    return out;
  }
  work->stgs->feastol = tol;
  work->stgs->abstol = tol;
  work->stgs->reltol = tol;
  work->stgs->maxit = settings.max_iterations;
  work->stgs->verbose = 0;

  const idxint flag = ECOS_solve(work);
  SolverOutcome out;
  std::ostringstream diag;
  diag << "ecos exitflag=" << flag << " iter=" << work->info->iter
       << " pres=" << work->info->pres << " dres=" << work->info->dres
       << " gap=" << work->info->gap << " n=" << n << " m=" << m << " p=" << p;
  const int iterations = static_cast<int>(work->info->iter);

  SolveStatus status = SolveStatus::numerical_failure;
  bool inaccurate = false;
  switch (flag) {
    case ECOS_OPTIMAL: status = SolveStatus::optimal; break;
    case ECOS_OPTIMAL + ECOS_INACC_OFFSET: status = SolveStatus::optimal; inaccurate = true; break;
    case ECOS_PINF: status = SolveStatus::infeasible; break;
    case ECOS_PINF + ECOS_INACC_OFFSET: status = SolveStatus::infeasible; inaccurate = true; break;
    case ECOS_DINF: status = SolveStatus::unbounded; break;
    case ECOS_DINF + ECOS_INACC_OFFSET: status = SolveStatus::unbounded; inaccurate = true; break;
    default: status = SolveStatus::numerical_failure; break;
  }
  if (status == SolveStatus::optimal) {
    for (int j = 0; j < n_all; ++j) {
      if (column[j] >= 0) x_full[j] = work->x[column[j]];
    }
  }
  ECOS_cleanup(work, 0);

  out = finish(prog, status, std::move(x_full), diag.str());
  out.iterations = iterations;
  out.reduced_accuracy = inaccurate;
  out.solve_time = elapsed();
  return out;
}

}  // namespace softcap::conic
