#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dea/config.hpp"
#include "dea/report.hpp"
#include "support/oracles.hpp"

using namespace dea;

namespace {

const char* kTable5Csv =
    "dmu,i:I1,i:I2,o:O1,o:O2\n"
    "DMU1,1,5,1,1\n"
    "DMU2,4,2,0,1\n"
    "DMU3,8,1,0,1\n";

const char* kTable9Csv =
    "dmu,i:I1,i:I2,o:O1\n"
    "DMU1,1,6,1\n"
    "DMU2,2,3,1\n"
    "DMU3,5,2,1\n";

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset_csv(in);
}

std::string render(const RunReport& rep, ReportFormat f) {
  std::ostringstream os;
  write_report(rep, f, os);
  return os.str();
}

}  // namespace

TEST_CASE("CSV ingestion of the worked tables") {
  const auto t5 = parse(kTable5Csv);
  CHECK(t5 == test::table5());
  const auto t9 = parse(kTable9Csv);
  CHECK(t9.size() == 3);
  CHECK(t9.num_inputs() == 2);
  CHECK(t9.num_outputs() == 1);
}

TEST_CASE("CSV columns may interleave and comments are skipped") {
  const auto d = parse("# units\ndmu,o:Y,i:X\nA,3,1\n\nB,2,2\n");
  CHECK(d.dmu(0).inputs == std::vector<double>{1});
  CHECK(d.dmu(0).outputs == std::vector<double>{3});
}

TEST_CASE("CSV errors name line and column") {
  try {
    parse("dmu,i:I1,o:O1\nA,1,x\nB,1,1\n");
    FAIL("expected a parse error");
  } catch (const DataFormatError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("line 2, column 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("dmu,i:I1,i:I2\nA,1,1\nB,1,1\n"), DataFormatError);
  CHECK_THROWS_AS(parse("dmu,o:O1\nA,1\nB,1\n"), DataFormatError);
  CHECK_THROWS_AS(parse("name,i:I1,o:O1\nA,1,1\nB,1,1\n"), DataFormatError);
  CHECK_THROWS_AS(parse("dmu,i:I1,o:O1\nA,1\nB,1,1\n"), DataFormatError);
  CHECK_THROWS_AS(parse("dmu,i:I1,o:O1\nA,1,0\nB,1,1\n"), ValidationError);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(
      "# fractional run\n"
      "model = fractional_gdse\n"
      "rts = grs(0.5, inf)\n"
      "direction = custom(5, 6 | 1)  # explicit\n"
      "weights = 1, 7, 1\n"
      "format = json\n");
  CHECK(cfg.model == "fractional_gdse");
  REQUIRE(cfg.rts.has_value());
  CHECK(cfg.rts->lower == 0.5);
  CHECK(!cfg.rts->upper);
  CHECK(cfg.direction == DirectionStrategy::custom);
  CHECK(cfg.custom_minus == std::vector<double>{5, 6});
  CHECK(cfg.custom_plus == std::vector<double>{1});
  CHECK(cfg.weights == std::vector<double>{1, 7, 1});
  CHECK(cfg.format == ReportFormat::json);
  CHECK(!cfg.is_preset());

  const auto p = parse_config("model = ChenLiang2011-O(M)\nbig_m = 1e6\n");
  CHECK(p.is_preset());
  CHECK(p.model == "ChenLiang2011-O");
  CHECK(p.params.big_m == 1e6);
}

TEST_CASE("config rejects bad input") {
  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = linear_gdse\nmodel = rdse\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = nothing\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("rts = grs(2, 3)\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("weights = 1, 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("include_self = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = AP\nrts = vrs\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = AP\ndirection = own_data\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = linear_gdse\nbig_m = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = linear_gdse\nradial_inputs = 1\n"), ConfigError);
  try {
    parse_config("model = linear_gdse\n\nfoo = 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("config is checked against the dataset before solving") {
  const auto d = test::table9();
  auto cfg = parse_config("weights = 1, 7\n");
  CHECK_THROWS_AS(run_evaluation(d, cfg), ConfigError);
  cfg = parse_config("direction = custom(1 | 1)\n");
  CHECK_THROWS_AS(run_evaluation(d, cfg), ConfigError);
  cfg = parse_config("model = M-Ray\n");
  CHECK_THROWS_AS(run_evaluation(d, cfg), ConfigError);
}

TEST_CASE("config hash ignores comments and key order") {
  const auto a = parse_config("model = linear_gdse\nrts = vrs\n");
  const auto b = parse_config("# same run\nrts = vrs\nmodel = linear_gdse\n");
  const auto c = parse_config("model = linear_gdse\nrts = crs\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("batch evaluation reproduces the fractional column") {
  const auto rep = run_evaluation(test::table5(), parse_config("model = fractional_gdse\n"));
  REQUIRE(rep.units.size() == 3);
  const double want[] = {2.375, 1.1286, 1.1};
  for (std::size_t k = 0; k < 3; ++k) CHECK(rep.units[k].result.score == doctest::Approx(want[k]).epsilon(1e-4));
  CHECK(rep.meta.family == "fractional_gdse");
  CHECK(rep.meta.rts == "crs");
  CHECK(rep.meta.feasibility_tol == 1e-9);

  const auto table = render(rep, ReportFormat::table);
  CHECK(table.find("2.3750") != std::string::npos);
}

TEST_CASE("preset runs report infeasible units with their diagnostic") {
  const auto rep = run_evaluation(test::table5(), parse_config("model = AP\n"));
  CHECK(rep.units[0].result.status == ScoreStatus::infeasible);
  CHECK(!rep.units[0].rank);
  CHECK(rep.units[0].result.warnings.front() == "[necessary-condition] Q_o = {O1} and g+_1 = 0");
  CHECK(rep.order == std::vector<std::size_t>{2, 1, 0});
  const auto table = render(rep, ReportFormat::table);
  CHECK(table.find("Inf.") != std::string::npos);
  CHECK(table.find("—") != std::string::npos);
  CHECK(table.find("Q_o = {O1} and g+_1 = 0") != std::string::npos);
}

TEST_CASE("weighted run flips the ranking") {
  const auto plain = run_evaluation(test::table9(), parse_config("model = fractional_gdse\n"));
  const auto weighted = run_evaluation(test::table9(), parse_config("model = fractional_gdse\nweights = 1, 7, 1\n"));
  CHECK(plain.units[2].rank == 3u);
  CHECK(weighted.units[2].rank == 1u);
  CHECK(weighted.units[0].rank == 3u);
  const double want[] = {1.1, 1.2, 1.5};
  for (std::size_t k = 0; k < 3; ++k) CHECK(weighted.units[k].result.score == doctest::Approx(want[k]).epsilon(1e-4));
  CHECK(weighted.meta.direction.find("weights (1, 7, 1)") != std::string::npos);
}

TEST_CASE("ranking policy") {
  RunReport rep;
  auto unit = [](std::string name, ScoreStatus st, double score) {
    DmuReport u;
    u.name = std::move(name);
    u.result.status = st;
    u.result.score = score;
    return u;
  };
  rep.units = {unit("b", ScoreStatus::optimal, 1.5), unit("a", ScoreStatus::optimal, 1.5),
               unit("c", ScoreStatus::infeasible, 0), unit("d", ScoreStatus::optimal, 2.0)};
  rank_dmus(rep);
  CHECK(rep.order == std::vector<std::size_t>{3, 1, 0, 2});
  CHECK(rep.units[1].rank == 2u);
  CHECK(rep.units[0].rank == 3u);
  CHECK(!rep.units[2].rank);

  RunReport none;
  none.units = {unit("x", ScoreStatus::infeasible, 0), unit("y", ScoreStatus::undefined, 0)};
  rank_dmus(none);
  CHECK(!none.units[0].rank);
  CHECK(!none.units[1].rank);
  CHECK(none.order == std::vector<std::size_t>{0, 1});
}

TEST_CASE("csv report with no optimal unit keeps a header and status rows") {
  const auto d = validate_dataset({{"A", {1}, {1, 0}}, {"B", {1}, {0, 1}}});
  const auto rep = run_evaluation(d, parse_config("model = AP\n"));
  const auto csv = render(rep, ReportFormat::csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("name,status,score,rank,", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.find(",infeasible,,") != std::string::npos);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("json round-trip is bit-exact") {
  const auto rep = run_evaluation(test::table5(), parse_config("model = linear_gdse\n"));
  const auto doc = nlohmann::json::parse(render(rep, ReportFormat::json));
  REQUIRE(doc["units"].size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(doc["units"][k]["score"].get<double>() == rep.units[k].result.score);
    CHECK(doc["units"][k]["name"] == rep.units[k].name);
  }
  CHECK(doc["metadata"]["config_hash"] == rep.meta.config_hash);
  CHECK(doc["units"][0]["Q_o"][0] == "O1");

  const auto ap = run_evaluation(test::table5(), parse_config("model = AP\n"));
  const auto apdoc = nlohmann::json::parse(render(ap, ReportFormat::json));
  CHECK(apdoc["units"][0]["score"].is_null());
  CHECK(apdoc["units"][0]["rank"].is_null());
}

TEST_CASE("re-running is byte-identical") {
  const auto cfg = parse_config("model = R-MAJ\n");
  for (auto f : {ReportFormat::table, ReportFormat::csv, ReportFormat::json}) {
    CHECK(render(run_evaluation(test::table5(), cfg), f) == render(run_evaluation(test::table5(), cfg), f));
  }
}

TEST_CASE("files: load, emit, unwritable destination") {
  const auto dir = std::filesystem::temp_directory_path() / "dea_cli_io_test";
  std::filesystem::create_directories(dir);
  const auto data = dir / "t5.csv";
  std::ofstream(data) << kTable5Csv;
  const auto cfg_path = dir / "run.cfg";
  std::ofstream(cfg_path) << "model = MAJ\nformat = csv\n";

  const auto cfg = load_config(cfg_path.string());
  const auto d = load_dataset(data.string());
  const auto rep = run_evaluation(d, cfg);
  const auto out = dir / "out.csv";
  emit_report(rep, cfg.format, out.string());
  std::ifstream in(out);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == render(rep, ReportFormat::csv));

  CHECK_THROWS_AS(emit_report(rep, cfg.format, (dir / "missing" / "x.csv").string()), ReportWriteError);
  CHECK_THROWS_AS(load_dataset((dir / "absent.csv").string()), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("check output lists zero-pattern sets and direction verdicts") {
  std::ostringstream os;
  write_check(test::table5(), parse_config("model = AP\n"), os);
  const auto text = os.str();
  CHECK(text.find("DMU1: P_o = {}, Q_o = {O1}") != std::string::npos);
  CHECK(text.find("[necessary-condition] Q_o = {O1} and g+_1 = 0") != std::string::npos);

  std::ostringstream bare;
  write_check(test::table5(), std::nullopt, bare);
  CHECK(bare.str().find("necessary") == std::string::npos);
}
