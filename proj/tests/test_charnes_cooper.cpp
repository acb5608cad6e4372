#include <doctest.h>

#include <random>

#include "dea/charnes_cooper.hpp"
#include "support/oracles.hpp"

using namespace dea;
using namespace dea::lp;

namespace {

// Fractional GDSE program over the oracle's feasible set.
FractionalProgram gdse_program(const EvaluationContext& ctx, const DirectionVector& g, test::GdseVars& vars) {
  FractionalProgram fp;
  vars = test::gdse_feasible_set(fp.feasible_set, ctx, g);
  fp.numerator.constant = 1.0;
  fp.denominator.constant = 1.0;
  for (auto id : vars.tm) fp.numerator.add(id, 1.0 / vars.tm.size());
  for (auto id : vars.tp) fp.denominator.add(id, -1.0 / vars.tp.size());
  return fp;
}

}  // namespace

TEST_CASE("linearized optimum for the first worked DMU") {
  const auto d = test::table5();
  const auto ctx = make_context(d, 0, RtsSpec::crs());
  test::GdseVars vars;
  const auto fp = gdse_program(ctx, test::positive_column_max(d), vars);
  const auto cc = charnes_cooper_linearize(fp);
  const auto out = solve_lp(cc.lp);
  REQUIRE(out.status == LpStatus::optimal);
  CHECK(out.objective == doctest::Approx(2.375).epsilon(1e-9));
  const auto x = cc.recover(out.values);
  CHECK(fp.ratio(x) == doctest::Approx(out.objective).epsilon(1e-9));
  CHECK(fp.feasible_set.max_violation(x) <= 1e-8);
}

TEST_CASE("identically-one denominator reduces to minimizing the numerator") {
  LinearProgram base;
  const auto x = base.add_variable("x");
  const auto y = base.add_variable("y");
  base.add_constraint(LinearExpr{}.add(x, 1).add(y, 1), Relation::greater_equal, 2.0);
  FractionalProgram fp;
  fp.feasible_set = base;
  fp.numerator.constant = 1.0;
  fp.numerator.add(x, 2.0).add(y, 3.0);
  fp.denominator.constant = 1.0;

  base.set_objective(fp.numerator);
  const auto direct = solve_lp(base);
  const auto cc = charnes_cooper_linearize(fp);
  const auto lin = solve_lp(cc.lp);
  REQUIRE(direct.status == LpStatus::optimal);
  REQUIRE(lin.status == LpStatus::optimal);
  CHECK(lin.objective == doctest::Approx(direct.objective).epsilon(1e-9));
}

TEST_CASE("finite bounds survive the homogenization") {
  FractionalProgram fp;
  const auto x = fp.feasible_set.add_variable("x", 1.0, 4.0);
  fp.numerator.add(x, 1.0);
  fp.numerator.constant = 2.0;
  fp.denominator.add(x, 1.0);
  fp.denominator.constant = 1.0;
  // (x + 2) / (x + 1) is decreasing: minimum at x = 4.
  const auto cc = charnes_cooper_linearize(fp);
  const auto out = solve_lp(cc.lp);
  REQUIRE(out.status == LpStatus::optimal);
  const auto rec = cc.recover(out.values);
  CHECK(rec[x] == doctest::Approx(4.0));
  CHECK(out.objective == doctest::Approx(6.0 / 5.0));
}

TEST_CASE("a vanishing scale variable is reported as denominator degeneracy") {
  // 1 / (1 + x) over x >= 0 approaches 0 only as x grows without bound.
  FractionalProgram fp;
  const auto x = fp.feasible_set.add_variable("x");
  fp.numerator.constant = 1.0;
  fp.denominator.constant = 1.0;
  fp.denominator.add(x, 1.0);
  const auto cc = charnes_cooper_linearize(fp);
  const auto out = solve_lp(cc.lp);
  REQUIRE(out.status == LpStatus::optimal);
  CHECK(out.objective == doctest::Approx(0.0));
  CHECK_THROWS_AS(cc.recover(out.values), DenominatorDegeneracy);
}

TEST_CASE("property: linearization matches Dinkelbach and round-trips") {
  std::mt19937_64 rng(314);
  test::InstanceShape shape;
  shape.n_min = 3;
  shape.n_max = 3;
  shape.m_min = shape.m_max = 2;
  shape.s_min = shape.s_max = 1;
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = test::random_dataset(rng, shape);
    const auto g = test::positive_column_max(d);
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto ctx = make_context(d, o, RtsSpec::crs());
      test::GdseVars vars;
      const auto fp = gdse_program(ctx, g, vars);
      const auto cc = charnes_cooper_linearize(fp);
      const auto out = solve_lp(cc.lp);
      REQUIRE(out.status == LpStatus::optimal);
      const auto oracle = test::dinkelbach(ctx, g);
      REQUIRE(oracle.has_value());
      CHECK(out.objective == doctest::Approx(*oracle).epsilon(1e-6));
      const auto x = cc.recover(out.values);
      CHECK(fp.feasible_set.max_violation(x) <= 1e-7);
      CHECK(fp.ratio(x) == doctest::Approx(out.objective).epsilon(1e-6));
    }
  }
}
