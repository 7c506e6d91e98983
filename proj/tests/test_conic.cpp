#include <cmath>

#include "doctest.h"
#include "softcap/conic.hpp"

using namespace softcap::conic;

TEST_CASE("linear cost over a disc") {
  // min x + y  s.t.  ||(x, y)|| <= 1
  ConicProgram p;
  const int x = p.add_variable(1.0);
  const int y = p.add_variable(1.0);
  const int t = p.add_variable();
  p.fix(t, 1.0);
  const int tail[2] = {x, y};
  p.add_soc(t, tail);
  const SolverOutcome out = solve(p);
  REQUIRE(out.status == SolveStatus::optimal);
  CHECK(out.objective == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-7));
  CHECK(out.primal[x] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("projection onto a ball with an L1 epigraph") {
  // min |x1 - 3| + |x2 + 1| written through auxiliaries, with ||x|| <= 2.
  ConicProgram p;
  const int x = p.add_variables(2);
  const int d0 = p.add_variable();
  const int d1 = p.add_variable();
  p.add_equality({{d0, 1.0}, {x, -1.0}}, -3.0);
  p.add_equality({{d1, 1.0}, {x + 1, -1.0}}, 1.0);
  const int d[2] = {d0, d1};
  const std::vector<int> t = l1_epigraph(p, d, 1.0);
  CHECK(t.size() == 2);
  const int r = p.add_variable(0.0, 2.0, 2.0);
  const int xs[2] = {x, x + 1};
  p.add_soc(r, xs);
  const SolverOutcome out = solve(p);
  REQUIRE(out.status == SolveStatus::optimal);
  // (3, -1) lies outside the ball; L1-nearest is (sqrt(3), -1) since moving
  // x2 toward zero gains less than it costs.
  CHECK(out.primal[x] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(out.primal[x + 1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(out.objective == doctest::Approx(3.0 - std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded statuses") {
  ConicProgram inf;
  const int a = inf.add_variable(1.0);
  const int h = inf.add_variable(0.0, 1.0, 1.0);
  const int tail[1] = {a};
  inf.add_soc(h, tail);
  inf.add_equality({{a, 1.0}}, 5.0);
  CHECK(solve(inf).status == SolveStatus::infeasible);

  ConicProgram unb;
  const int u = unb.add_variable(-1.0);
  const int v = unb.add_variable();
  const int tail2[1] = {v};
  unb.add_soc(u, tail2);
  CHECK(solve(unb).status == SolveStatus::unbounded);
}

TEST_CASE("presolve detects conflicting fixings") {
  ConicProgram p;
  const int a = p.add_variable(1.0, 0.0, 10.0);
  p.add_equality({{a, 1.0}}, 2.0);
  p.add_equality({{a, 2.0}}, 6.0);
  CHECK(solve(p).status == SolveStatus::infeasible);
}

TEST_CASE("every variable in at most one cone") {
  ConicProgram p;
  const int a = p.add_variables(3);
  const int tail[2] = {a + 1, a + 2};
  p.add_soc(a, tail);
  const int again[1] = {a + 1};
  CHECK_THROWS_AS(p.add_nonnegative(again), ConicProgramError);
  const int bad[1] = {17};
  CHECK_THROWS_AS(p.add_soc(a + 1, bad), ConicProgramError);
}

TEST_CASE("dump and parse round trip") {
  ConicProgram p;
  const int a = p.add_variables(3);
  p.set_cost(a, 0.1);
  p.set_bounds(a + 1, -kInf, 7.25);
  p.add_objective_constant(1.0 / 3.0);
  p.add_equality({{a, 1.0 / 7.0}, {a + 2, -2.0}}, 0.3);
  const int tail[1] = {a + 2};
  p.add_soc(a, tail);
  const int nn[1] = {a + 1};
  p.add_nonnegative(nn);
  const std::string text = p.dump();
  const ConicProgram q = ConicProgram::parse(text);
  CHECK(q == p);
  CHECK(q.dump() == text);
  CHECK_THROWS_AS(ConicProgram::parse("conic-program 1\nvariables 2\nbogus\nend\n"), ConicProgramError);
}

TEST_CASE("objective value matches the solver objective") {
  ConicProgram p;
  const int x = p.add_variable(2.0, 1.0, 4.0);
  p.add_objective_constant(3.0);
  const SolverOutcome out = solve(p);
  REQUIRE(out.status == SolveStatus::optimal);
  CHECK(out.primal[x] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(out.objective == doctest::Approx(p.objective_value(out.primal)).epsilon(1e-9));
  CHECK(out.objective == doctest::Approx(5.0).epsilon(1e-7));
}
