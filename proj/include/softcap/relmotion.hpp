#pragma once

// Clohessy-Wiltshire relative motion in the target-centered Hill frame {O}:
// x radial, y along-track, z along the orbital angular momentum.

#include <random>

#include "softcap/types.hpp"

namespace softcap {

inline constexpr double kEarthMu = 3.986004418e14;  // m^3/s^2

struct OrbitContext {
  double semi_major_axis = 7.738e6;  // m
  double mu = kEarthMu;              // m^3/s^2
  double mean_motion = 0.0;          // rad/s, sqrt(mu / a^3)
  double chaser_mass = 1500.0;       // kg

  static OrbitContext make(double semi_major_axis, double chaser_mass,
                           double mu = kEarthMu);
};

struct ChaserState {
  Vec3 r = Vec3::Zero();  // m
  Vec3 v = Vec3::Zero();  // m/s

  Vec6 stacked() const {
    Vec6 x;
    x << r, v;
    return x;
  }
  static ChaserState from_stacked(const Vec6& x) {
    return ChaserState{x.head<3>(), x.tail<3>()};
  }
};

struct ContinuousDynamics {
  Mat6 A;
  Mat63 B;
};

struct DiscreteDynamics {
  Mat6 A_d;
  Mat63 B_d;
  double dt = 0.0;

  Vec6 step(const Vec6& x, const Vec3& u) const { return A_d * x + B_d * u; }
};

ContinuousDynamics cw_continuous(const OrbitContext& ctx);

// Exact zero-order-hold discretization from the augmented matrix
// exponential exp([[A, B], [0, 0]] dt).
DiscreteDynamics discretize(const Mat6& A, const Mat63& B, double dt);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Drift-free CW orbit: radial amplitude A0, along-track 2 A0, cross-track B0.
// theta and psi are the in-plane and cross-track phases.
ChaserState safe_orbit_state(double A0, double B0, double theta, double psi,
                             double n);

struct SafeOrbitSample {
  ChaserState state;
  double A0 = 0.0;
  double B0 = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

SafeOrbitSample sample_safe_orbit(std::mt19937_64& rng, Range A0_range,
                                  Range B0_range, const OrbitContext& ctx);

// Residuals of the no-drift / no-offset conditions:
// ydot + 2 n x and y - 2 xdot / n.
Eigen::Vector2d safe_orbit_residuals(const ChaserState& s, double n);

// Radial and cross-track amplitudes sqrt((xdot/n)^2 + x^2), sqrt((zdot/n)^2 + z^2).
Eigen::Vector2d safe_orbit_amplitudes(const ChaserState& s, double n);

}  // namespace softcap
