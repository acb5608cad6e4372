// Randomized properties of the model families that the acceptance binary
// does not already cover.

#include <doctest.h>

#include <random>

#include "dea/models.hpp"
#include "support/oracles.hpp"

using namespace dea;

TEST_CASE("property: own-data directions keep every contraction factor at most one") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = test::positive_dataset(rng);
    const auto rts = test::random_grs(rng);
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto ctx = make_context(d, o, rts);
      const auto g = build_direction(ctx, DirectionStrategy::own_data);
      REQUIRE(validate_direction(ctx, g).welldef_grs_ok);
      for (const auto& r : {solve_fractional_gdse(ctx, g), solve_linear_gdse(ctx, g)}) {
        REQUIRE(r.optimal());
        for (double t : r.bundle.tau_plus) CHECK(t <= 1.0 + 1e-9);
        CHECK(r.score >= 1.0 - 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("property: fractional index never exceeds the hybrid index, additive optima are nested") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = test::positive_dataset(rng);
    const auto rts = test::random_grs(rng);
    const auto g = test::positive_column_max(d);
    const HybridPartition part{test::uniform_index(rng, 0, d.num_inputs()),
                               test::uniform_index(rng, 0, d.num_outputs())};
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto ctx = make_context(d, o, rts);
      const auto f = solve_fractional_gdse(ctx, g);
      const auto l = solve_linear_gdse(ctx, g);
      const auto h = solve_hdse(ctx, g, part);
      REQUIRE(f.optimal());
      REQUIRE(l.optimal());
      REQUIRE(h.optimal());
      // The hybrid feasible set is a subset of the non-radial one.
      CHECK(f.score <= h.score + 1e-6);
      CHECK(l.objective_value <= h.objective_value + 1e-9);
    }
  }
}

TEST_CASE("property: non-radial input adjustment is bounded by the radial one") {
  // When the radial optimum tau is non-negative, setting every tau_i to it is
  // feasible for the non-radial model, so sum(tau_i) <= m * tau.
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = test::random_dataset(rng);
    const auto g = test::positive_column_max(d);
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto ctx = make_context(d, o, RtsSpec::crs());
      const auto rad = solve_input_radial(ctx, g.g_minus);
      const auto non = solve_input_nonradial(ctx, g.g_minus);
      REQUIRE(rad.status == non.status);
      if (!rad.optimal()) continue;
      CHECK(non.score >= 1.0 - 1e-9);
      if (rad.score < 1.0) continue;
      const double m = static_cast<double>(d.num_inputs());
      CHECK(non.score - 1.0 <= m * (rad.score - 1.0) + 1e-7);
    }
  }
}

TEST_CASE("property: optimal bundles respect the intensity bounds and sign rules") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = test::random_dataset(rng);
    const auto rts = test::random_grs(rng);
    const auto g = test::positive_column_max(d);
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto ctx = make_context(d, o, rts);
      for (const auto& r : {solve_fractional_gdse(ctx, g), solve_linear_gdse(ctx, g)}) {
        if (r.bundle.lp_status != lp::LpStatus::optimal) continue;
        const double sum = r.bundle.lambda_sum();
        CHECK(sum >= rts.lower - 1e-8);
        if (rts.upper) CHECK(sum <= *rts.upper + 1e-8);
        for (double t : r.bundle.tau_minus) CHECK(t >= -1e-9);
        for (double t : r.bundle.tau_plus) CHECK(t >= -1e-9);
        for (double y : r.projection.outputs) CHECK(y >= -1e-8);
      }
    }
  }
}
