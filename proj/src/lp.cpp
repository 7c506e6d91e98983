#include "softcap/lp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace softcap::lp {

namespace {

struct StandardForm {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  std::vector<int> basis;
  int pivots = 0;
};

// min cost'x s.t. A x = b (b >= 0), x >= 0. Columns q..q+p-1 of the
// working tableau are artificials.
StandardForm simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& cost) {
  const Eigen::Index p = A.rows();
  const Eigen::Index q = A.cols();
  const double scale = std::max({1.0, A.cwiseAbs().maxCoeff(),
                                 b.cwiseAbs().maxCoeff()});
  const double pivot_tol = 1e-11 * scale;
  const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double opt_tol = 1e-12 * cost_scale * scale;

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(p + 1, q + p + 1);
  T.topLeftCorner(p, q) = A;
  T.block(0, q, p, p).setIdentity();
  T.topRightCorner(p, 1) = b;

  std::vector<int> basis(p);
  for (Eigen::Index i = 0; i < p; ++i) basis[i] = static_cast<int>(q + i);
  std::vector<bool> allowed(q + p, true);

  StandardForm out;
  const int max_pivots = 50 * static_cast<int>(p + q) + 100;

  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    T.row(r) /= T(r, col);
    for (Eigen::Index i = 0; i <= p; ++i) {
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    }
    basis[r] = static_cast<int>(col);
    ++out.pivots;
  };

  auto run = [&]() -> LpStatus {
    while (out.pivots < max_pivots) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < q + p; ++j) {
        if (allowed[j] && T(p, j) < -opt_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < p; ++i) {
        if (T(i, enter) > pivot_tol) {
          const double ratio = T(i, q + p) / T(i, enter);
          if (leave < 0 || ratio < best - 1e-15 * std::abs(best) ||
              (std::abs(ratio - best) <= 1e-15 * std::abs(best) &&
               basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, enter);
    }
    return LpStatus::iteration_limit;
  };

  // Phase 1: minimize the sum of artificials.
  for (Eigen::Index j = 0; j < q; ++j) T(p, j) = -T.col(j).head(p).sum();
  T(p, q + p) = -b.sum();
  LpStatus st = run();
  if (st == LpStatus::iteration_limit) {
    out.status = st;
    return out;
  }
  if (-T(p, q + p) > 1e-9 * scale * std::max<double>(1.0, static_cast<double>(p))) {
    out.status = LpStatus::infeasible;
    return out;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (basis[i] < q) continue;
    for (Eigen::Index j = 0; j < q; ++j) {
      if (std::abs(T(i, j)) > pivot_tol) {
        pivot(i, j);
        break;
      }
    }
  }
  for (Eigen::Index j = q; j < q + p; ++j) allowed[j] = false;

  // Phase 2.
  T.row(p).setZero();
  for (Eigen::Index j = 0; j < q; ++j) T(p, j) = cost[j];
  for (Eigen::Index i = 0; i < p; ++i) {
    if (basis[i] < q && cost[basis[i]] != 0.0) T.row(p) -= cost[basis[i]] * T.row(i);
  }
  st = run();
  out.status = st;
  if (st != LpStatus::optimal) return out;

  out.x = Eigen::VectorXd::Zero(q);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (basis[i] < q) out.x[basis[i]] = T(i, q + p);
  }
  out.basis = basis;
  return out;
}

}  // namespace

InequalityLpResult solve_inequality_lp(const Eigen::MatrixXd& G,
                                       const Eigen::VectorXd& h,
                                       const Eigen::VectorXd& c,
                                       double activity_tol) {
  const Eigen::Index m = G.rows();
  const Eigen::Index n = G.cols();

  // Dual in standard form: rows are the n stationarity conditions.
  Eigen::MatrixXd A = G.transpose();
  Eigen::VectorXd b = -c;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b[i] < 0.0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
      sign[i] = -1.0;
    }
  }

  const StandardForm sf = simplex(A, b, h);
  InequalityLpResult res;
  res.pivots = sf.pivots;
  if (sf.status == LpStatus::infeasible) {
    // Dual infeasible with a feasible primal means the primal is unbounded;
    // callers here always pass feasible primals.
    res.status = LpStatus::unbounded;
    return res;
  }
  if (sf.status == LpStatus::unbounded) {
    res.status = LpStatus::infeasible;
    return res;
  }
  if (sf.status != LpStatus::optimal) {
    res.status = sf.status;
    return res;
  }

  // Primal from complementary slackness: B' pi = cost_B on the final basis.
  Eigen::MatrixXd Bt(n, n);
  Eigen::VectorXd cb(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = sf.basis[i];
    if (j < m) {
      Bt.row(i) = A.col(j).transpose();
      cb[i] = h[j];
    } else {
      Bt.row(i) = Eigen::RowVectorXd::Unit(n, j - m);
      cb[i] = 0.0;
    }
  }
  const Eigen::VectorXd pi = Bt.partialPivLu().solve(cb);
  res.x = pi.cwiseProduct(sign);
  res.lambda = sf.x;
  res.objective = c.dot(res.x);
  res.status = LpStatus::optimal;

  const Eigen::VectorXd slack = h - G * res.x;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double scale = std::max(1.0, std::abs(h[j]));
    if (slack[j] <= activity_tol * scale) res.tight.push_back(static_cast<int>(j));
  }
  return res;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

}  // namespace softcap::lp
