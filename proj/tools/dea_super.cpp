// dea-super: batch super-efficiency evaluation from the command line.
//
//   dea-super run --data units.csv --config run.cfg
//   dea-super presets
//   dea-super check --data units.csv [--config run.cfg]
//
// Exit status: 0 success, 1 invalid data/config, 2 solver or conditioning failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dea/catalog.hpp"
#include "dea/charnes_cooper.hpp"
#include "dea/config.hpp"
#include "dea/lp.hpp"
#include "dea/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kSolver = 2;

const char* scale_label(dea::BlockScale b) {
  switch (b) {
    case dea::BlockScale::zero: return "0";
    case dea::BlockScale::one: return "1";
    case dea::BlockScale::inv_m: return "1/m";
    case dea::BlockScale::inv_s: return "1/s";
    case dea::BlockScale::m_plus_s_over_m: return "(m+s)/m";
    case dea::BlockScale::m_plus_s_over_s: return "(m+s)/s";
    case dea::BlockScale::inv_big_m: return "1/M";
  }
  return "?";
}

const char* recipe_label(dea::DirectionRecipe r) {
  switch (r) {
    case dea::DirectionRecipe::own_data: return "own";
    case dea::DirectionRecipe::column_max: return "max";
    case dea::DirectionRecipe::column_range: return "range";
    case dea::DirectionRecipe::unit: return "ones";
    case dea::DirectionRecipe::efficient_column_max: return "max(eff)";
    case dea::DirectionRecipe::modified_ray: return "a*x+1, b*y+1";
  }
  return "?";
}

void list_presets() {
  std::printf("%-17s %-16s %-10s %-14s %-8s %-8s %s\n", "preset", "family", "rts", "direction", "g- x", "g+ x",
              "notes");
  for (const auto& p : dea::preset_registry()) {
    std::string notes;
    if (p.requires_positive_data) notes += "positive data; ";
    if (p.transform_unverified) notes += "index transform unverified; ";
    if (!p.enforce_output_nonneg) notes += "negative projections allowed; ";
    if (!notes.empty()) notes.resize(notes.size() - 2);
    std::printf("%-17s %-16s %-10s %-14s %-8s %-8s %s\n", p.name.c_str(), dea::to_string(p.family),
                p.rts.to_string().c_str(), recipe_label(p.recipe), scale_label(p.input_scale),
                scale_label(p.output_scale), notes.c_str());
  }
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return kOk;
  } catch (const dea::lp::ConditioningError& e) {
    std::cerr << "dea-super: conditioning error: " << e.what() << "\n";
    return kSolver;
  } catch (const dea::lp::DenominatorDegeneracy& e) {
    std::cerr << "dea-super: solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const dea::ReportWriteError& e) {
    std::cerr << "dea-super: " << e.what() << "\n";
    return kInvalid;
  } catch (const dea::DataFormatError& e) {
    std::cerr << "dea-super: data: " << e.what() << "\n";
    return kInvalid;
  } catch (const dea::ValidationError& e) {
    std::cerr << "dea-super: invalid data";
    if (!e.dmu().empty()) std::cerr << " (DMU '" << e.dmu() << "')";
    std::cerr << ": " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dea-super: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "dea-super: " << e.what() << "\n";
    return kSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional super-efficiency scores for DEA datasets"};
  app.require_subcommand(1);

  std::string data;
  std::string config_path;
  std::string output;

  auto* run = app.add_subcommand("run", "evaluate every DMU and emit a ranked report");
  run->add_option("--data", data, "CSV with columns dmu,i:<name>...,o:<name>...")->required();
  run->add_option("--config", config_path, "key = value run configuration")->required();
  run->add_option("--output", output, "report destination (overrides the config's output key)");

  app.add_subcommand("presets", "list the model catalog");

  auto* check = app.add_subcommand("check", "zero-pattern and direction diagnostics without solving");
  check->add_option("--data", data, "CSV data file")->required();
  check->add_option("--config", config_path, "optional run configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (app.got_subcommand("presets")) {
    list_presets();
    return kOk;
  }
  if (app.got_subcommand("run")) {
    return guarded([&] {
      const auto cfg = dea::load_config(config_path);
      const auto dataset = dea::load_dataset(data, cfg.allow_negative);
      const auto report = dea::run_evaluation(dataset, cfg);
      dea::emit_report(report, cfg.format, output.empty() ? cfg.output : output);
    });
  }
  return guarded([&] {
    std::optional<dea::RunConfig> cfg;
    if (!config_path.empty()) cfg = dea::load_config(config_path);
    const auto dataset = dea::load_dataset(data, cfg && cfg->allow_negative);
    dea::write_check(dataset, cfg, std::cout);
  });
}
