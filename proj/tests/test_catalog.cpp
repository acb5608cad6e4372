#include <doctest.h>

#include <algorithm>
#include <random>

#include "dea/catalog.hpp"
#include "support/oracles.hpp"

using namespace dea;

namespace {

constexpr double kGolden = 1e-4;

bool has_tag(const ScoreResult& r, const std::string& tag) {
  return std::any_of(r.warnings.begin(), r.warnings.end(), [&](const std::string& w) { return w.rfind(tag, 0) == 0; });
}

std::vector<ScoreResult> run_all(const std::string& preset, const Dataset& d, const PresetParams& params = {}) {
  std::vector<ScoreResult> out;
  for (std::size_t o = 0; o < d.size(); ++o) out.push_back(run_resolved(resolve_preset(preset, d, o, params)));
  return out;
}

}  // namespace

TEST_CASE("registry lists every named preset once") {
  const std::vector<std::string> names{
      "AP",          "MAJ",          "M-MAJ",          "R-MAJ",         "Ray",           "M-Ray",
      "Super-SBM-C", "Super-SBM-C(I)", "Super-SBM-C(II)", "Super-SBM-I",   "Super-SBM-V",   "Super-SBM-I-V",
      "Super-ERM",   "LJK",          "Norm1",          "Norm1-V",       "Super-Add(I)",  "Super-Add(II)",
      "Super-Add(III)", "Super-Add(IV)", "Chen2011",   "Cook2009-I",    "Cook2009-O",    "ChenLiang2011-I",
      "ChenLiang2011-O"};
  CHECK(preset_registry().size() == names.size());
  for (const auto& n : names) CHECK(find_preset(n).name == n);
  CHECK(find_preset("ChenLiang2011-O(M)").name == "ChenLiang2011-O");
  CHECK_THROWS_AS(find_preset("Nope"), PresetError);
}

TEST_CASE("resolved invocations") {
  const auto d = test::table5();
  const auto ap = resolve_preset("AP", d, 1);
  CHECK(ap.family == ModelFamily::input_radial);
  CHECK(ap.context.rts().is_crs());
  CHECK(ap.direction.g_minus == std::vector<double>{4, 2});
  CHECK(ap.direction.g_plus == std::vector<double>{0, 0});
  CHECK(ap.direction.provenance.preset == "AP");

  const auto sbmv = resolve_preset("Super-SBM-V", d, 0);
  CHECK(sbmv.family == ModelFamily::fractional_gdse);
  CHECK(sbmv.context.rts().is_vrs());
  CHECK(sbmv.direction.g_minus == std::vector<double>{1, 5});
  CHECK(sbmv.direction.g_plus == std::vector<double>{1, 1});

  const auto add1 = resolve_preset("Super-Add(I)", d, 0);
  CHECK(add1.family == ModelFamily::linear_gdse);
  CHECK(add1.direction.g_minus == std::vector<double>{0.5, 0.5});
  CHECK(add1.direction.g_plus == std::vector<double>{0.5, 0.5});

  const auto norm1 = resolve_preset("Norm1", d, 0);
  CHECK(norm1.direction.g_minus == std::vector<double>{4, 2.5});
  CHECK(norm1.direction.g_plus == std::vector<double>{0.5, 0.5});

  const auto ray = resolve_preset("Ray", d, 0);
  CHECK(ray.family == ModelFamily::rdse);
  CHECK(ray.context.rts().is_vrs());
  CHECK(!ray.options.enforce_output_nonneg);

  const auto cook = resolve_preset("Cook2009-I", d, 0, {1e4, {}, {}});
  CHECK(cook.family == ModelFamily::hdse);
  CHECK(cook.direction.g_minus == std::vector<double>{1, 5});
  CHECK(cook.direction.g_plus[0] == doctest::Approx(1e-4));
  CHECK(cook.options.partition.radial_inputs == 2);
  CHECK(cook.options.partition.radial_outputs == 2);
  CHECK(cook.options.hybrid.free_input_adjustment);

  const auto cl = resolve_preset("ChenLiang2011-I", d, 0);
  CHECK(cl.options.partition.radial_inputs == 2);
  CHECK(cl.options.partition.radial_outputs == 0);

  const auto c2 = resolve_preset("Super-SBM-C(II)", d, 0);
  CHECK(c2.context.rts().lower == 1.0);
  CHECK(!c2.context.rts().upper);
}

TEST_CASE("M-Ray needs both parameters") {
  const auto d = test::table5();
  CHECK_THROWS_AS(resolve_preset("M-Ray", d, 0), PresetError);
  const auto r = resolve_preset("M-Ray", d, 0, {1e5, 2.0, 0.5});
  CHECK(r.direction.g_minus == std::vector<double>{3, 11});
  CHECK(r.direction.g_plus == std::vector<double>{1.5, 1.5});
}

TEST_CASE("structural family membership by source table") {
  for (const auto& p : preset_registry()) {
    CAPTURE(p.name);
    if (p.source.find("RDSE") != std::string::npos) CHECK(is_instance_of(p.family, ModelFamily::rdse));
    if (p.source.find("fractional") != std::string::npos) CHECK(is_instance_of(p.family, ModelFamily::fractional_gdse));
    if (p.source.find("linear") != std::string::npos) CHECK(is_instance_of(p.family, ModelFamily::linear_gdse));
  }
  CHECK(is_instance_of(ModelFamily::input_radial, ModelFamily::rdse));
  CHECK(!is_instance_of(ModelFamily::rdse, ModelFamily::input_radial));
}

TEST_CASE("worked-table preset scores") {
  const auto d = test::table5();
  const auto ap = run_all("AP", d);
  CHECK(ap[0].status == ScoreStatus::infeasible);
  CHECK(ap[1].score == doctest::Approx(1.3).epsilon(kGolden));
  CHECK(ap[2].score == doctest::Approx(2.0).epsilon(kGolden));

  const auto maj = run_all("MAJ", d);
  CHECK(maj[2].score == doctest::Approx(1.2).epsilon(kGolden));

  const auto rmaj = run_all("R-MAJ", d);
  CHECK(rmaj[1].score == doctest::Approx(1.0849).epsilon(kGolden));
  CHECK(has_tag(rmaj[1], "[negative-projection]"));

  const auto ljk = run_all("LJK", d);
  CHECK(ljk[0].status == ScoreStatus::infeasible);
  CHECK(ljk[1].score == doctest::Approx(1.2571).epsilon(kGolden));
  CHECK(ljk[2].score == doctest::Approx(1.2).epsilon(kGolden));
}

TEST_CASE("uncalibrated transforms carry a warning") {
  const auto d = test::table5();
  const auto norm1 = run_all("Norm1", d);
  REQUIRE(norm1[1].optimal());
  CHECK(has_tag(norm1[1], "[transform-unverified]"));
  CHECK(norm1[1].score == norm1[1].objective_value);
  const auto ap = run_all("AP", d);
  CHECK(!has_tag(ap[1], "[transform-unverified]"));
}

TEST_CASE("positive-data presets mark zero cells as undefined") {
  const auto d = test::table5();
  const auto sbm = run_all("Super-SBM-C", d);
  CHECK(sbm[1].status == ScoreStatus::undefined);
  CHECK(has_tag(sbm[1], "[positive-data]"));
  // The oriented variant ignores the frozen output block.
  const auto sbmi = run_all("Super-SBM-I", d);
  CHECK(!has_tag(sbmi[1], "[positive-data]"));
}

TEST_CASE("Ray on a twin scores one") {
  const auto d = validate_dataset({{"A", {2, 3}, {4}}, {"B", {2, 3}, {4}}, {"C", {5, 5}, {1}}});
  const auto r = run_resolved(resolve_preset("Ray", d, 0));
  REQUIRE(r.optimal());
  CHECK(r.score == doctest::Approx(1.0));
}

TEST_CASE("efficiency pre-pass") {
  const auto d = test::table5();
  const auto eff = extreme_efficient_units(d, RtsSpec::crs());
  CHECK(std::all_of(eff.begin(), eff.end(), [](bool b) { return b; }));

  // C is dominated by A, so it is not extreme-efficient and drops out of M-MAJ's maxima.
  const auto d2 = validate_dataset({{"A", {1, 2}, {3}}, {"B", {3, 1}, {3}}, {"C", {9, 9}, {1}}});
  const auto eff2 = extreme_efficient_units(d2, RtsSpec::crs());
  CHECK(eff2 == std::vector<bool>{true, true, false});
  const auto mm = resolve_preset("M-MAJ", d2, 0);
  CHECK(mm.direction.g_minus == std::vector<double>{3, 2});
}

TEST_CASE("property: Super-SBM-C and Super-ERM coincide") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = test::positive_dataset(rng);
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto a = resolve_preset("Super-SBM-C", d, o);
      const auto b = resolve_preset("Super-ERM", d, o);
      CHECK(a.family == b.family);
      CHECK(a.direction.g_minus == b.direction.g_minus);
      CHECK(a.direction.g_plus == b.direction.g_plus);
      const auto ra = run_resolved(a);
      const auto rb = run_resolved(b);
      REQUIRE(ra.status == rb.status);
      if (ra.optimal()) CHECK(ra.score == rb.score);
    }
  }
}

TEST_CASE("property: Norm1 and Super-Add(III) differ by the factor m + s") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = test::positive_dataset(rng);
    const double k = static_cast<double>(d.num_inputs() + d.num_outputs());
    for (std::size_t o = 0; o < d.size(); ++o) {
      const auto a = run_resolved(resolve_preset("Norm1", d, o));
      const auto b = run_resolved(resolve_preset("Super-Add(III)", d, o));
      REQUIRE(a.bundle.lp_status == b.bundle.lp_status);
      if (a.bundle.lp_status != lp::LpStatus::optimal) continue;
      CHECK(a.objective_value == doctest::Approx(k * b.objective_value).epsilon(1e-7));
    }
  }
}

TEST_CASE("property: big-M oriented presets are stable in M") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = test::positive_dataset(rng);
    for (const char* name : {"Cook2009-I", "Cook2009-O", "ChenLiang2011-I", "ChenLiang2011-O"}) {
      for (std::size_t o = 0; o < d.size(); ++o) {
        const auto a = run_resolved(resolve_preset(name, d, o, {1e4, {}, {}}));
        const auto b = run_resolved(resolve_preset(name, d, o, {1e6, {}, {}}));
        CAPTURE(name);
        REQUIRE(a.status == b.status);
        if (a.optimal()) CHECK(a.score == doctest::Approx(b.score).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("preference weights pass through presets") {
  const auto d = test::table9();
  const std::vector<double> w{1, 7, 1};
  const auto rm = resolve_preset("Super-SBM-C(I)", d, 2);
  const auto r = run_resolved(rm, w);
  REQUIRE(r.optimal());
  CHECK(r.score == doctest::Approx(1.5).epsilon(kGolden));
}
