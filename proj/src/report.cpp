#include "dea/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dea/catalog.hpp"
#include "dea/lp.hpp"

namespace dea {

namespace {

constexpr const char* kNoRank = "—";

std::size_t resolve_count(const std::optional<std::size_t>& v, std::size_t all) {
  if (!v || *v == std::numeric_limits<std::size_t>::max()) return all;
  return *v;
}

DirectionVector family_direction(const RunConfig& config, const EvaluationContext& ctx) {
  if (config.direction == DirectionStrategy::custom) return make_custom_direction(config.custom_minus, config.custom_plus);
  return build_direction(ctx, config.direction, config.include_self);
}

}  // namespace

RunReport run_evaluation(const Dataset& dataset, const RunConfig& config) {
  check_config(config, dataset);

  RunReport rep;
  rep.num_inputs = dataset.num_inputs();
  rep.num_outputs = dataset.num_outputs();
  rep.meta.model = config.model;
  rep.meta.feasibility_tol = lp::kFeasibilityTol;
  rep.meta.value_tol = lp::kValueTol;
  rep.meta.config_hash = config.hash();

  const bool preset = config.is_preset();
  const ModelFamily family = preset ? find_preset(config.model).family : *parse_family(config.model);
  const RtsSpec rts = preset ? find_preset(config.model).rts : config.rts.value_or(RtsSpec::crs());
  rep.meta.family = to_string(family);
  rep.meta.rts = rts.to_string();

  ModelOptions options;
  options.enforce_output_nonneg = config.enforce_output_nonneg;
  options.partition.radial_inputs = resolve_count(config.radial_inputs, dataset.num_inputs());
  options.partition.radial_outputs = resolve_count(config.radial_outputs, dataset.num_outputs());
  options.hybrid.free_input_adjustment = config.free_input_adjustment;
  options.hybrid.free_output_adjustment = config.free_output_adjustment;

  for (std::size_t o = 0; o < dataset.size(); ++o) {
    DmuReport u;
    u.name = dataset.dmu(o).name;
    u.index = o;
    if (preset) {
      const ResolvedModel rm = resolve_preset(config.model, dataset, o, config.params);
      u.result = run_resolved(rm, config.weights);
      u.direction = config.weights.empty() ? rm.direction : apply_preference_weights(rm.direction, config.weights);
      u.sets = slack_index_sets(rm.context);
    } else {
      const auto ctx = make_context(dataset, o, rts);
      DirectionVector g = family_direction(config, ctx);
      if (!config.weights.empty()) g = apply_preference_weights(g, config.weights);
      u.result = solve_model(family, ctx, g, options);
      u.direction = std::move(g);
      u.sets = slack_index_sets(ctx);
    }
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      if (j != o) u.reference.push_back(dataset.dmu(j).name);
    }
    rep.units.push_back(std::move(u));
  }
  if (!rep.units.empty()) rep.meta.direction = rep.units.front().direction.provenance.describe();
  rank_dmus(rep);
  return rep;
}

void rank_dmus(RunReport& report) {
  std::vector<std::size_t> ranked;
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < report.units.size(); ++k) {
    auto& u = report.units[k];
    u.rank.reset();
    (u.result.optimal() && std::isfinite(u.result.score) ? ranked : rest).push_back(k);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    const auto& ua = report.units[a];
    const auto& ub = report.units[b];
    if (ua.result.score != ub.result.score) return ua.result.score > ub.result.score;
    return ua.name < ub.name;
  });
  for (std::size_t k = 0; k < ranked.size(); ++k) report.units[ranked[k]].rank = k + 1;
  report.order = ranked;
  report.order.insert(report.order.end(), rest.begin(), rest.end());
}

namespace {

std::string full(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string score_cell(const ScoreResult& r) {
  switch (r.status) {
    case ScoreStatus::optimal: return fixed4(r.score);
    case ScoreStatus::infeasible: return "Inf.";
    case ScoreStatus::undefined: return "undef.";
  }
  return {};
}

// Display width in code points, so the em dash used for missing ranks lines up.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad_left(const std::string& s, std::size_t w) { return std::string(w - std::min(w, width(s)), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, width(s)), ' '); }

std::string rank_cell(const DmuReport& u) { return u.rank ? std::to_string(*u.rank) : kNoRank; }

std::vector<double> component_tau(const std::vector<double>& tau, std::size_t n) {
  return tau.size() == n ? tau : std::vector<double>(n, std::numeric_limits<double>::quiet_NaN());
}

void write_table(const RunReport& report, std::ostream& out) {
  out << "model     " << report.meta.model << " (" << report.meta.family << ", " << report.meta.rts << ")\n";
  out << "direction " << report.meta.direction << "\n";
  out << "config    " << report.meta.config_hash << "\n\n";

  std::vector<std::string> head{"DMU", "status", "score", "rank", "P_o", "Q_o"};
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k : report.order) {
    const auto& u = report.units[k];
    rows.push_back({u.name, to_string(u.result.status), score_cell(u.result), rank_cell(u),
                    format_index_set(u.sets.p, 'I'), format_index_set(u.sets.q, 'O')});
  }
  std::vector<std::size_t> w(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    w[c] = width(head[c]);
    for (const auto& row : rows) w[c] = std::max(w[c], width(row[c]));
  }
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      // Name and status left-aligned, numbers right-aligned.
      out << (c < 2 || c > 3 ? pad_right(row[c], w[c]) : pad_left(row[c], w[c]));
    }
    out << "\n";
  };
  emit(head);
  for (const auto& row : rows) emit(row);

  bool any = false;
  for (std::size_t k : report.order) {
    const auto& u = report.units[k];
    for (const auto& msg : u.result.warnings) {
      if (!any) out << "\nwarnings\n";
      any = true;
      out << "  " << u.name << ": " << msg << "\n";
    }
  }
}

void write_csv(const RunReport& report, std::ostream& out) {
  const std::size_t m = report.num_inputs;
  const std::size_t s = report.num_outputs;
  out << "name,status,score,rank,objective,tau_radial";
  for (std::size_t i = 0; i < m; ++i) out << ",tau_minus_I" << i + 1;
  for (std::size_t r = 0; r < s; ++r) out << ",tau_plus_O" << r + 1;
  for (std::size_t i = 0; i < m; ++i) out << ",proj_I" << i + 1;
  for (std::size_t r = 0; r < s; ++r) out << ",proj_O" << r + 1;
  out << ",input_factor,output_factor\n";

  for (std::size_t k : report.order) {
    const auto& u = report.units[k];
    const auto& res = u.result;
    const bool solved = res.bundle.lp_status == lp::LpStatus::optimal;
    out << u.name << "," << to_string(res.status) << "," << (res.optimal() ? full(res.score) : "") << ","
        << (u.rank ? std::to_string(*u.rank) : "") << "," << full(res.objective_value) << ","
        << (solved && res.bundle.tau_radial ? full(*res.bundle.tau_radial) : "");
    const auto tm = component_tau(solved ? res.bundle.tau_minus : std::vector<double>{}, m);
    const auto tp = component_tau(solved ? res.bundle.tau_plus : std::vector<double>{}, s);
    for (double v : tm) out << "," << full(v);
    for (double v : tp) out << "," << full(v);
    const auto px = component_tau(solved ? res.projection.inputs : std::vector<double>{}, m);
    const auto py = component_tau(solved ? res.projection.outputs : std::vector<double>{}, s);
    for (double v : px) out << "," << full(v);
    for (double v : py) out << "," << full(v);
    out << "," << (res.decomposition ? full(res.decomposition->input_factor) : "") << ","
        << (res.decomposition ? full(res.decomposition->output_factor) : "") << "\n";
  }
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json labels(const std::vector<std::size_t>& idx, char prefix) {
  auto arr = nlohmann::json::array();
  for (std::size_t k : idx) arr.push_back(std::string(1, prefix) + std::to_string(k + 1));
  return arr;
}

void write_json(const RunReport& report, std::ostream& out) {
  nlohmann::json doc;
  doc["metadata"] = {
      {"model", report.meta.model},
      {"family", report.meta.family},
      {"direction", report.meta.direction},
      {"rts", report.meta.rts},
      {"feasibility_tol", report.meta.feasibility_tol},
      {"value_tol", report.meta.value_tol},
      {"config_hash", report.meta.config_hash},
      {"inputs", report.num_inputs},
      {"outputs", report.num_outputs},
  };
  auto ranking = nlohmann::json::array();
  for (std::size_t k : report.order) {
    if (report.units[k].rank) ranking.push_back(report.units[k].name);
  }
  doc["ranking"] = ranking;

  auto units = nlohmann::json::array();
  for (const auto& u : report.units) {
    const auto& res = u.result;
    const bool solved = res.bundle.lp_status == lp::LpStatus::optimal;
    nlohmann::json j;
    j["name"] = u.name;
    j["status"] = to_string(res.status);
    j["score"] = res.optimal() ? num(res.score) : nlohmann::json(nullptr);
    j["rank"] = u.rank ? nlohmann::json(*u.rank) : nlohmann::json(nullptr);
    j["objective"] = num(res.objective_value);
    j["lp_status"] = lp::to_string(res.bundle.lp_status);
    j["direction"] = {{"g_minus", u.direction.g_minus}, {"g_plus", u.direction.g_plus}};
    if (solved) {
      j["tau_radial"] = res.bundle.tau_radial ? num(*res.bundle.tau_radial) : nlohmann::json(nullptr);
      j["tau_minus"] = res.bundle.tau_minus;
      j["tau_plus"] = res.bundle.tau_plus;
      nlohmann::json lam = nlohmann::json::object();
      for (std::size_t k = 0; k < res.bundle.lambdas.size() && k < u.reference.size(); ++k) {
        lam[u.reference[k]] = res.bundle.lambdas[k];
      }
      j["lambdas"] = lam;
      j["projection"] = {{"inputs", res.projection.inputs}, {"outputs", res.projection.outputs}};
    } else {
      j["tau_radial"] = nullptr;
      j["tau_minus"] = nullptr;
      j["tau_plus"] = nullptr;
      j["lambdas"] = nullptr;
      j["projection"] = nullptr;
    }
    j["decomposition"] = res.decomposition ? nlohmann::json{{"input_factor", num(res.decomposition->input_factor)},
                                                            {"output_factor", num(res.decomposition->output_factor)}}
                                           : nlohmann::json(nullptr);
    j["P_o"] = labels(u.sets.p, 'I');
    j["Q_o"] = labels(u.sets.q, 'O');
    j["warnings"] = res.warnings;
    units.push_back(std::move(j));
  }
  doc["units"] = units;
  out << doc.dump(2) << "\n";
}

}  // namespace

void write_report(const RunReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::table: write_table(report, out); break;
    case ReportFormat::csv: write_csv(report, out); break;
    case ReportFormat::json: write_json(report, out); break;
  }
}

void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  if (path.empty()) {
    write_report(report, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ReportWriteError("cannot write report to '" + path + "'");
  write_report(report, format, out);
  out.flush();
  if (!out) throw ReportWriteError("error while writing report to '" + path + "'");
}

void write_check(const Dataset& dataset, const std::optional<RunConfig>& config, std::ostream& out) {
  if (config) check_config(*config, dataset);
  const bool preset = config && config->is_preset();
  const RtsSpec rts = !config ? RtsSpec::crs()
                      : preset ? find_preset(config->model).rts
                               : config->rts.value_or(RtsSpec::crs());
  out << "rts " << rts.to_string() << "\n";
  for (std::size_t o = 0; o < dataset.size(); ++o) {
    const auto ctx = make_context(dataset, o, rts);
    const auto sets = slack_index_sets(ctx);
    out << dataset.dmu(o).name << ": P_o = " << format_index_set(sets.p, 'I')
        << ", Q_o = " << format_index_set(sets.q, 'O');
    if (rts.is_crs() && !sets.q.empty()) out << " (CRS reduced technology infeasible)";
    out << "\n";
    if (!config) continue;

    std::optional<DirectionVector> g;
    if (preset) {
      // The M-MAJ recipe needs an efficiency pre-pass, which is a solve.
      if (find_preset(config->model).recipe == DirectionRecipe::efficient_column_max) {
        out << "  direction: needs an efficiency pre-pass; not checked\n";
        continue;
      }
      g = resolve_preset(config->model, dataset, o, config->params).direction;
    } else {
      g = family_direction(*config, ctx);
    }
    if (!config->weights.empty()) g = apply_preference_weights(*g, config->weights);
    const auto rep = validate_direction(ctx, *g);
    out << "  necessary condition: " << (rep.necessary_ok ? "ok" : rep.necessary_diagnostic()) << "\n";
    out << "  well-defined (GRS bound): " << (rep.welldef_grs_ok ? "yes" : "no")
        << ", (VRS bound): " << (rep.welldef_vrs_ok ? "yes" : "no") << "\n";
    out << "  strictly positive direction: " << (rep.guaranteed_feasible ? "yes" : "no") << "\n";
  }
}

}  // namespace dea
