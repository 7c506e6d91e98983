#include <string>

#include "doctest.h"
#include "softcap/capture.hpp"
#include "softcap/config.hpp"

using namespace softcap;

TEST_CASE("key-value parsing") {
  const KeyValueFile f = KeyValueFile::parse(
      "# header\n"
      "top = 1\n"
      "[limits]\n"
      "U_max = 100   # N\n"
      "D = [0, 0, 2.7]\n"
      "name = \"corrected\"\n"
      "flag = true\n");
  CHECK(f.get_int("top") == 1);
  CHECK(f.get_double("limits.U_max") == 100.0);
  CHECK(f.get_array("limits.D", 3) == std::vector<double>{0.0, 0.0, 2.7});
  CHECK(f.get_string("limits.name") == "corrected");
  CHECK(f.get_bool("limits.flag", false));
  CHECK(f.get_double("limits.missing", 4.5) == 4.5);
  CHECK(f.line_of("limits.D") == 5);
}

TEST_CASE("errors carry the offending line") {
  auto line_of_error = [](const std::string& text) {
    try {
      (void)KeyValueFile::parse(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of_error("a = 1\n[s\nb = 2\n") == 2);
  CHECK(line_of_error("a = 1\nnot a pair\n") == 2);
  CHECK(line_of_error("a = 1\na = 2\n") == 2);
  CHECK(line_of_error("a = 1\n\nb =\n") == 3);

  const KeyValueFile f = KeyValueFile::parse("x = abc\nv = [1, 2]\n");
  CHECK_THROWS_AS(f.get_double("x"), ConfigError);
  try {
    (void)f.get_array("v", 3);
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("scenario keys map onto the scenario") {
  const KeyValueFile f = KeyValueFile::parse(
      "[limits]\nv_max = 1.2\n[discretization]\nN = 77\n[fov]\nform = \"literal\"\n"
      "[chaser]\nr0 = [10, 20, 5]\nv0 = [0, 0, 0]\nhalf_extents = [1, 1, 2]\n"
      "[target]\nq0 = [1, 0, 0, 0]\nomega0_deg = [1, 2, 3]\n");
  const Scenario s = load_scenario(f);
  CHECK(s.limits.velocity_max == 1.2);
  CHECK(s.steps == 77);
  CHECK(s.fov_form == FovForm::literal);
  CHECK(s.chaser0.r == Vec3(10, 20, 5));
  CHECK(s.geometry.chaser.b[4] == 2.0);
  CHECK(s.target0.omega.y() == doctest::Approx(2.0 * std::numbers::pi / 180.0));
}

TEST_CASE("scenario errors") {
  auto fails = [](const std::string& text) {
    try {
      (void)load_scenario(KeyValueFile::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string base = "[chaser]\nr0 = [10, 20, 5]\nv0 = [0, 0, 0]\n[target]\nq0 = [1, 0, 0, 0]\nomega0 = [0, 0, 0]\n";
  CHECK(fails(base).empty());
  CHECK(fails(base + "[limits]\nU_maxx = 3\n").find("unknown key 'limits.U_maxx'") != std::string::npos);
  CHECK(fails(base + "[fov]\nform = \"loose\"\n").find("fov") != std::string::npos);
  CHECK(fails(base + "[limits]\nv_max = -1\n").find("v_max") != std::string::npos);
  CHECK(!fails("[chaser]\nv0 = [0, 0, 0]\n").empty());
  CHECK(!fails(base + "[target]\ninertia = [1, 0, 0, 0, 1, 0, 0, 0, 3]\n").empty());
}

TEST_CASE("seeded scenarios sample Table ranges reproducibly") {
  const std::string text = "[initial]\nseed = 99\ncase = 4\n";
  const Scenario a = load_scenario(KeyValueFile::parse(text));
  const Scenario b = load_scenario(KeyValueFile::parse(text));
  CHECK(a.chaser0.r == b.chaser0.r);
  CHECK(a.target0.omega == b.target0.omega);
  CHECK(a.target0.omega.norm() <= 10.0 * std::numbers::pi / 180.0);
  const Eigen::Vector2d amp = safe_orbit_amplitudes(a.chaser0, a.orbit.mean_motion);
  CHECK(amp[0] >= 15.0);
  CHECK(amp[0] <= 25.0);
}

TEST_CASE("scenario text round trip") {
  Scenario s = reference_scenario();
  s.steps = 123;
  s.fov_form = FovForm::literal;
  s.geometry.chaser = ConvexPolytope::box(Vec3(0.5, 0.7, 1.1));
  const Scenario r = load_scenario(KeyValueFile::parse(scenario_to_text(s)));
  CHECK(r.steps == 123);
  CHECK(r.fov_form == FovForm::literal);
  CHECK(r.chaser0.r == s.chaser0.r);
  CHECK(r.chaser0.v == s.chaser0.v);
  CHECK(r.target0.omega == s.target0.omega);
  CHECK(r.inertia.matrix() == s.inertia.matrix());
  CHECK(r.geometry.chaser.b == s.geometry.chaser.b);
  CHECK(r.docking.half_angle == doctest::Approx(s.docking.half_angle).epsilon(1e-15));
  CHECK(scenario_to_text(r) == scenario_to_text(s));
}
