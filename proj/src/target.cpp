#include "softcap/target.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace softcap {

InertiaMatrix::InertiaMatrix(const Mat3& J) : J_(J) {
  if (!J.allFinite()) throw InvalidInput("inertia matrix has non-finite entries");
  if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput("inertia matrix is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(J);
  const Vec3 m = eig.eigenvalues();
  if (m.minCoeff() <= 0.0) {
    throw InvalidInput("inertia matrix is not positive definite");
  }
  const double slack = 1e-12 * m.sum();
  if (m[0] + m[1] < m[2] - slack || m[0] + m[2] < m[1] - slack ||
      m[1] + m[2] < m[0] - slack) {
    throw InvalidInput("principal moments violate the triangle inequality");
  }
  J_inv_ = J.inverse();
}

InertiaMatrix InertiaMatrix::reference_target() {
  Mat3 J;
  J << 5.89056, 0.0, 0.0,
       0.0, 11.4462, 0.233516,
       0.0, 0.233516, 11.5365;
  return InertiaMatrix(J);
}

TargetDerivative tumble_derivative(const Vec4& q, const Vec3& omega,
                                   const InertiaMatrix& J) {
  TargetDerivative d;
  Vec4 w4;
  w4 << 0.0, omega;
  d.q_dot = 0.5 * lmult(q) * w4;
  d.omega_dot = J.inverse() * (-omega.cross(J.matrix() * omega));
  return d;
}

namespace {

using Row7 = Eigen::Matrix<double, 1, 7>;

Row7 pack(const TargetState& s) {
  Row7 r;
  r << s.q.coeffs().transpose(), s.omega.transpose();
  return r;
}

// Clamped cubic spline on a uniform grid: solves for nodal second
// derivatives column by column (Thomas algorithm).
Eigen::Matrix<double, Eigen::Dynamic, 7> clamped_second_derivatives(
    const Eigen::Matrix<double, Eigen::Dynamic, 7>& y, double h,
    const TumbleTrajectory::Rate& d0, const TumbleTrajectory::Rate& dn) {
  const Eigen::Index n = y.rows();
  Eigen::Matrix<double, Eigen::Dynamic, 7> M =
      Eigen::Matrix<double, Eigen::Dynamic, 7>::Zero(n, 7);
  if (n < 2) return M;
  std::vector<double> diag(n), upper(n), lower(n);
  for (int c = 0; c < 7; ++c) {
    std::vector<double> rhs(n);
    diag[0] = h / 3.0;
    upper[0] = h / 6.0;
    rhs[0] = (y(1, c) - y(0, c)) / h - d0[c];
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      lower[i] = h / 6.0;
      diag[i] = 2.0 * h / 3.0;
      upper[i] = h / 6.0;
      rhs[i] = (y(i + 1, c) - 2.0 * y(i, c) + y(i - 1, c)) / h;
    }
    lower[n - 1] = h / 6.0;
    diag[n - 1] = h / 3.0;
    rhs[n - 1] = dn[c] - (y(n - 1, c) - y(n - 2, c)) / h;

    std::vector<double> cp(n), dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      const double m = diag[i] - lower[i] * cp[i - 1];
      cp[i] = (i + 1 < n) ? upper[i] / m : 0.0;
      dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
    }
    M(n - 1, c) = dp[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) {
      M(i, c) = dp[i] - cp[i] * M(i + 1, c);
    }
  }
  return M;
}

}  // namespace

TumbleTrajectory::TumbleTrajectory(double timestep, std::vector<TargetState> nodes,
                                   const Rate& start_rate, const Rate& end_rate)
    : dt_(timestep), nodes_(std::move(nodes)) {
  if (!(dt_ > 0.0)) throw InvalidInput("tumble trajectory timestep must be positive");
  if (nodes_.empty()) throw InvalidInput("tumble trajectory needs at least one node");

  Rate d0 = start_rate;
  Rate dn = end_rate;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].q.coeffs().dot(nodes_[i - 1].q.coeffs()) < 0.0) {
      nodes_[i].q = Quaternion(-nodes_[i].q.coeffs());
      if (i + 1 == nodes_.size()) dn.head<4>() = -dn.head<4>();
    }
  }

  const auto n = static_cast<Eigen::Index>(nodes_.size());
  values_.resize(n, 7);
  for (Eigen::Index i = 0; i < n; ++i) values_.row(i) = pack(nodes_[i]);
  second_ = clamped_second_derivatives(values_, dt_, d0, dn);
}

TargetState TumbleTrajectory::sample(double t) const {
  const double T = horizon();
  if (!(t >= 0.0) || t > T * (1.0 + 1e-12) + 1e-12) {
    throw std::out_of_range("tumble sample time outside [0, horizon]");
  }
  const double u = t / dt_;
  const double k_floor = std::floor(u);
  auto k = static_cast<std::size_t>(k_floor);
  if (u == k_floor && k < nodes_.size()) return nodes_[k];
  if (k + 1 >= nodes_.size()) return nodes_.back();

  const double h = dt_;
  const double a = (static_cast<double>(k + 1) * h - t) / h;
  const double b = 1.0 - a;
  const auto i = static_cast<Eigen::Index>(k);
  const Row7 y = a * values_.row(i) + b * values_.row(i + 1) +
                 ((a * a * a - a) * second_.row(i) +
                  (b * b * b - b) * second_.row(i + 1)) *
                     (h * h / 6.0);
  TargetState s;
  s.q = Quaternion(Vec4(y.head<4>().transpose()));
  s.omega = y.tail<3>().transpose();
  return s;
}

void TumbleTrajectory::write_csv(std::ostream& out) const {
  out << "t,q_s,q_x,q_y,q_z,w_x,w_y,w_z\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Vec4& q = nodes_[i].q.coeffs();
    const Vec3& w = nodes_[i].omega;
    out << dt_ * static_cast<double>(i) << ',' << q[0] << ',' << q[1] << ','
        << q[2] << ',' << q[3] << ',' << w[0] << ',' << w[1] << ',' << w[2]
        << '\n';
  }
}

TumbleTrajectory propagate(const TargetState& x0, const InertiaMatrix& J,
                           double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw InvalidInput("propagate: horizon and dt must be positive");
  }
  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  std::vector<TargetState> nodes;
  nodes.reserve(steps + 1);
  nodes.push_back(x0);

  Vec4 q = x0.q.coeffs();
  Vec3 w = x0.omega;
  for (std::size_t i = 0; i < steps; ++i) {
    const TargetDerivative k1 = tumble_derivative(q, w, J);
    const TargetDerivative k2 =
        tumble_derivative(q + 0.5 * dt * k1.q_dot, w + 0.5 * dt * k1.omega_dot, J);
    const TargetDerivative k3 =
        tumble_derivative(q + 0.5 * dt * k2.q_dot, w + 0.5 * dt * k2.omega_dot, J);
    const TargetDerivative k4 =
        tumble_derivative(q + dt * k3.q_dot, w + dt * k3.omega_dot, J);
    q += dt / 6.0 * (k1.q_dot + 2.0 * k2.q_dot + 2.0 * k3.q_dot + k4.q_dot);
    w += dt / 6.0 *
         (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot);
    q.normalize();
    nodes.push_back(TargetState{Quaternion(q), w});
  }

  auto rate_of = [&J](const TargetState& s) {
    const TargetDerivative d = tumble_derivative(s, J);
    TumbleTrajectory::Rate r;
    r << d.q_dot, d.omega_dot;
    return r;
  };
  const TumbleTrajectory::Rate start = rate_of(nodes.front());
  const TumbleTrajectory::Rate end = rate_of(nodes.back());
  return TumbleTrajectory(dt, std::move(nodes), start, end);
}

TargetState sample_random_tumble(std::mt19937_64& rng, double rate_max) {
  if (!(rate_max > 0.0)) throw InvalidInput("rate_max must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vec4 q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = gauss(rng);
  } while (q.norm() < 1e-6);

  Vec3 dir;
  do {
    for (int i = 0; i < 3; ++i) dir[i] = gauss(rng);
  } while (dir.norm() < 1e-6);

  const double magnitude = rate_max * unit(rng);
  TargetState s;
  s.q = Quaternion(q);
  s.omega = dir.normalized() * magnitude;
  return s;
}

}  // namespace softcap
