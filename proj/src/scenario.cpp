#include <cmath>
#include <cstdio>
#include <sstream>

#include "softcap/capture.hpp"

namespace softcap {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 vec3_of(const std::vector<double>& v) { return Vec3(v[0], v[1], v[2]); }

ConvexPolytope load_polytope(const KeyValueFile& f, const std::string& section,
                             const ConvexPolytope& fallback) {
  const std::string half = section + ".half_extents";
  const std::string normals = section + ".face_normals";
  const std::string offsets = section + ".face_offsets";
  if (f.has(half) && (f.has(normals) || f.has(offsets))) {
    throw ConfigError(f.line_of(half), section + ": give half_extents or faces, not both");
  }
  ConvexPolytope p = fallback;
  if (f.has(half)) {
    p = ConvexPolytope::box(vec3_of(f.get_array(half, 3)));
  } else if (f.has(normals) || f.has(offsets)) {
    if (!f.has(normals) || !f.has(offsets)) {
      throw ConfigError(f.line_of(f.has(normals) ? normals : offsets),
                        section + ": face_normals and face_offsets go together");
    }
    const std::vector<double> b = f.get_array(offsets);
    const std::vector<double> a = f.get_array(normals, 3 * b.size());
    p.A.resize(static_cast<Eigen::Index>(b.size()), 3);
    p.b.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      p.A.row(r) = Eigen::RowVector3d(a[3 * i], a[3 * i + 1], a[3 * i + 2]);
      p.b(r) = b[i];
    }
  }
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(f.line_of(f.has(half) ? half : (f.has(offsets) ? offsets : normals)),
                      section + ": " + e.what());
  }
  return p;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const Vec3& v) { return "[" + fmt(v.x()) + ", " + fmt(v.y()) + ", " + fmt(v.z()) + "]"; }

}  // namespace

const char* to_string(FovForm f) {
  return f == FovForm::corrected ? "corrected" : "literal";
}

FovForm fov_form_from_string(const std::string& s) {
  if (s == "corrected") return FovForm::corrected;
  if (s == "literal") return FovForm::literal;
  throw InvalidInput("unknown fov form '" + s + "' (corrected or literal)");
}

double Scenario::tumble_rate_bound() const {
  const double lever = capture_chaser.norm() + capture_target.norm();
  if (lever <= 0.0) return limits.angular_rate_max;
  return std::min(limits.angular_rate_max, limits.velocity_max / lever);
}

void Scenario::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput(std::string(what) + " must be positive");
  };
  positive(dt, "dt");
  positive(limits.thrust_max, "U_max");
  positive(limits.velocity_max, "v_max");
  positive(limits.angular_rate_max, "omega_max");
  positive(limits.position_max, "r_max");
  positive(terminal.position, "eps_p");
  positive(terminal.velocity, "eps_v");
  positive(orbit.chaser_mass, "m_c");
  positive(orbit.mean_motion, "mean motion");
  positive(scp.alpha_min, "alpha_min");
  positive(solver_tolerance, "solver tolerance");
  if (scp.slack_penalty < 0.0 || scp.control_weight < 0.0) {
    throw InvalidInput("gamma and psi must be nonnegative");
  }
  if (!(docking.half_angle > 0.0 && docking.half_angle < std::numbers::pi / 2)) {
    throw InvalidInput("docking half angle must lie in (0, 90) deg");
  }
  if (steps < 2) throw InvalidInput("N must be at least 2");
  if (docking.steps < 0 || docking.steps > steps) {
    throw InvalidInput("N_dock must lie in [0, N]");
  }
  if (scp.max_iterations < 0) throw InvalidInput("i_max must be nonnegative");
  if (limits.angular_rate_max * dt >= std::numbers::pi) {
    throw InvalidInput("omega_max * dt must be below pi");
  }
  geometry.chaser.validate();
  geometry.target.validate();
}

Scenario reference_scenario() {
  Scenario s;
  s.chaser0 = safe_orbit_state(20.0, 15.0, 0.6, 1.2, s.orbit.mean_motion);
  s.target0.q = Quaternion::identity();
  s.target0.omega = Vec3(2.0, 3.0, -1.5) * kDeg;
  return s;
}

std::mt19937_64 case_stream(std::uint64_t seed, std::uint64_t case_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(case_index),
                    static_cast<std::uint32_t>(case_index >> 32)};
  return std::mt19937_64(seq);
}

InitialConditions sample_initial_conditions(std::mt19937_64& rng, const SamplingRanges& ranges,
                                            const OrbitContext& orbit) {
  InitialConditions ic;
  ic.target = sample_random_tumble(rng, ranges.tumble_rate_max);
  const SafeOrbitSample orbit_sample = sample_safe_orbit(rng, ranges.A0, ranges.B0, orbit);
  ic.chaser = orbit_sample.state;
  ic.A0 = orbit_sample.A0;
  ic.B0 = orbit_sample.B0;
  return ic;
}

Scenario load_scenario(const KeyValueFile& f) {
  f.reject_unknown({
      "orbit.semi_major_axis", "orbit.mu", "orbit.chaser_mass",
      "cost.gamma", "cost.psi", "cost.gamma_in_problem2",
      "limits.U_max", "limits.r_max", "limits.v_max", "limits.omega_max",
      "terminal.eps_p", "terminal.eps_v", "terminal.D_c", "terminal.D_t",
      "docking.N_dock", "docking.theta_deg",
      "scp.alpha_min", "scp.i_max",
      "discretization.dt", "discretization.N",
      "fov.form",
      "solver.tolerance",
      "target.q0", "target.omega0", "target.omega0_deg", "target.inertia",
      "target.half_extents", "target.face_normals", "target.face_offsets",
      "chaser.r0", "chaser.v0",
      "chaser.half_extents", "chaser.face_normals", "chaser.face_offsets",
      "initial.seed", "initial.case", "initial.A0", "initial.B0",
      "initial.tumble_rate_max_deg",
      "experiment.enforce_tumble_bound",
  });
  Scenario s;
  const double a = f.get_double("orbit.semi_major_axis", s.orbit.semi_major_axis);
  const double mc = f.get_double("orbit.chaser_mass", s.orbit.chaser_mass);
  const double mu = f.get_double("orbit.mu", kEarthMu);
  if (!(a > 0.0) || !(mc > 0.0) || !(mu > 0.0)) {
    throw ConfigError(f.line_of(f.has("orbit.semi_major_axis") ? "orbit.semi_major_axis"
                                                               : "orbit.chaser_mass"),
                      "orbit parameters must be positive");
  }
  s.orbit = OrbitContext::make(a, mc, mu);

  s.scp.control_weight = f.get_double("cost.gamma", s.scp.control_weight);
  s.scp.slack_penalty = f.get_double("cost.psi", s.scp.slack_penalty);
  s.scp.weight_problem2_control = f.get_bool("cost.gamma_in_problem2", false);
  s.limits.thrust_max = f.get_double("limits.U_max", s.limits.thrust_max);
  s.limits.position_max = f.get_double("limits.r_max", s.limits.position_max);
  s.limits.velocity_max = f.get_double("limits.v_max", s.limits.velocity_max);
  s.limits.angular_rate_max = f.get_double("limits.omega_max", s.limits.angular_rate_max);
  s.terminal.position = f.get_double("terminal.eps_p", s.terminal.position);
  s.terminal.velocity = f.get_double("terminal.eps_v", s.terminal.velocity);
  if (f.has("terminal.D_c")) s.capture_chaser = vec3_of(f.get_array("terminal.D_c", 3));
  if (f.has("terminal.D_t")) s.capture_target = vec3_of(f.get_array("terminal.D_t", 3));
  s.docking.steps = static_cast<int>(f.get_int("docking.N_dock", s.docking.steps));
  s.docking.half_angle = f.get_double("docking.theta_deg", 30.0) * kDeg;
  s.scp.alpha_min = f.get_double("scp.alpha_min", s.scp.alpha_min);
  s.scp.max_iterations = static_cast<int>(f.get_int("scp.i_max", s.scp.max_iterations));
  s.dt = f.get_double("discretization.dt", s.dt);
  s.steps = static_cast<int>(f.get_int("discretization.N", s.steps));
  s.solver_tolerance = f.get_double("solver.tolerance", s.solver_tolerance);
  s.enforce_tumble_bound = f.get_bool("experiment.enforce_tumble_bound", true);
  if (f.has("fov.form")) {
    try {
      s.fov_form = fov_form_from_string(f.get_string("fov.form"));
    } catch (const InvalidInput& e) {
      throw ConfigError(f.line_of("fov.form"), e.what());
    }
  }

  if (f.has("target.inertia")) {
    const std::vector<double> j = f.get_array("target.inertia", 9);
    Mat3 J;
    J << j[0], j[1], j[2], j[3], j[4], j[5], j[6], j[7], j[8];
    try {
      s.inertia = InertiaMatrix(J);
    } catch (const InvalidInput& e) {
      throw ConfigError(f.line_of("target.inertia"), e.what());
    }
  }
  s.geometry.chaser = load_polytope(f, "chaser", s.geometry.chaser);
  s.geometry.target = load_polytope(f, "target", s.geometry.target);

  const bool sampled = f.has("initial.seed");
  if (sampled) {
    SamplingRanges ranges;
    if (f.has("initial.A0")) {
      const auto r = f.get_array("initial.A0", 2);
      ranges.A0 = {r[0], r[1]};
    }
    if (f.has("initial.B0")) {
      const auto r = f.get_array("initial.B0", 2);
      ranges.B0 = {r[0], r[1]};
    }
    ranges.tumble_rate_max = f.get_double("initial.tumble_rate_max_deg", 10.0) * kDeg;
    auto rng = case_stream(static_cast<std::uint64_t>(f.get_int("initial.seed")),
                           static_cast<std::uint64_t>(f.get_int("initial.case", 0)));
    const InitialConditions ic = sample_initial_conditions(rng, ranges, s.orbit);
    s.chaser0 = ic.chaser;
    s.target0 = ic.target;
  } else {
    for (const char* key : {"chaser.r0", "chaser.v0", "target.q0"}) {
      if (!f.has(key)) throw ConfigError(0, std::string("missing key '") + key + "' (or initial.seed)");
    }
    if (!f.has("target.omega0") && !f.has("target.omega0_deg")) {
      throw ConfigError(0, "missing key 'target.omega0' (or initial.seed)");
    }
  }
  if (f.has("chaser.r0")) s.chaser0.r = vec3_of(f.get_array("chaser.r0", 3));
  if (f.has("chaser.v0")) s.chaser0.v = vec3_of(f.get_array("chaser.v0", 3));
  if (f.has("target.q0")) {
    const auto q = f.get_array("target.q0", 4);
    const Vec4 c(q[0], q[1], q[2], q[3]);
    if (!(c.norm() > 0.0)) throw ConfigError(f.line_of("target.q0"), "target.q0 must be nonzero");
    s.target0.q = Quaternion(c);
  }
  if (f.has("target.omega0") && f.has("target.omega0_deg")) {
    throw ConfigError(f.line_of("target.omega0_deg"), "give omega0 or omega0_deg, not both");
  }
  if (f.has("target.omega0")) s.target0.omega = vec3_of(f.get_array("target.omega0", 3));
  if (f.has("target.omega0_deg")) {
    s.target0.omega = vec3_of(f.get_array("target.omega0_deg", 3)) * kDeg;
  }

  try {
    s.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(0, e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  const KeyValueFile f = KeyValueFile::load(path);
  try {
    return load_scenario(f);
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.message(), path);
  }
}

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream o;
  auto faces = [&](const ConvexPolytope& p) {
    std::string n = "face_normals = [";
    std::string b = "face_offsets = [";
    for (Eigen::Index i = 0; i < p.faces(); ++i) {
      const char* sep = i == 0 ? "" : ", ";
      n += sep + fmt(p.A(i, 0)) + ", " + fmt(p.A(i, 1)) + ", " + fmt(p.A(i, 2));
      b += sep + fmt(p.b(i));
    }
    o << n << "]\n" << b << "]\n";
  };
  o << "[orbit]\nsemi_major_axis = " << fmt(s.orbit.semi_major_axis) << "\nmu = " << fmt(s.orbit.mu)
    << "\nchaser_mass = " << fmt(s.orbit.chaser_mass) << "\n\n";
  o << "[cost]\ngamma = " << fmt(s.scp.control_weight) << "\npsi = " << fmt(s.scp.slack_penalty)
    << "\ngamma_in_problem2 = " << (s.scp.weight_problem2_control ? "true" : "false") << "\n\n";
  o << "[limits]\nU_max = " << fmt(s.limits.thrust_max) << "\nr_max = " << fmt(s.limits.position_max)
    << "\nv_max = " << fmt(s.limits.velocity_max) << "\nomega_max = " << fmt(s.limits.angular_rate_max)
    << "\n\n";
  o << "[terminal]\neps_p = " << fmt(s.terminal.position) << "\neps_v = " << fmt(s.terminal.velocity)
    << "\nD_c = " << fmt(s.capture_chaser) << "\nD_t = " << fmt(s.capture_target) << "\n\n";
  o << "[docking]\nN_dock = " << s.docking.steps << "\ntheta_deg = " << fmt(s.docking.half_angle / kDeg)
    << "\n\n";
  o << "[scp]\nalpha_min = " << fmt(s.scp.alpha_min) << "\ni_max = " << s.scp.max_iterations << "\n\n";
  o << "[discretization]\ndt = " << fmt(s.dt) << "\nN = " << s.steps << "\n\n";
  o << "[fov]\nform = \"" << to_string(s.fov_form) << "\"\n\n";
  o << "[solver]\ntolerance = " << fmt(s.solver_tolerance) << "\n\n";
  o << "[experiment]\nenforce_tumble_bound = " << (s.enforce_tumble_bound ? "true" : "false") << "\n\n";
  const Vec4& q = s.target0.q.coeffs();
  const Mat3& J = s.inertia.matrix();
  o << "[target]\nq0 = [" << fmt(q[0]) << ", " << fmt(q[1]) << ", " << fmt(q[2]) << ", " << fmt(q[3])
    << "]\nomega0 = " << fmt(s.target0.omega) << "\ninertia = [";
  for (int i = 0; i < 9; ++i) o << (i ? ", " : "") << fmt(J(i / 3, i % 3));
  o << "]\n";
  faces(s.geometry.target);
  o << "\n[chaser]\nr0 = " << fmt(s.chaser0.r) << "\nv0 = " << fmt(s.chaser0.v) << "\n";
  faces(s.geometry.chaser);
  return o.str();
}

CaptureSetup::CaptureSetup(Scenario scenario, int horizon_steps)
    : scenario_(std::move(scenario)), horizon_steps_(horizon_steps) {
  scenario_.validate();
  if (horizon_steps_ < 2) throw InvalidInput("capture horizon needs at least 2 nodes");
  const ContinuousDynamics c = cw_continuous(scenario_.orbit);
  dynamics_ = discretize(c.A, c.B, scenario_.dt);
  tumble_ = std::make_shared<const TumbleTrajectory>(
      propagate(scenario_.target0, scenario_.inertia, scenario_.dt * (horizon_steps_ - 1), scenario_.dt));
}

}  // namespace softcap
