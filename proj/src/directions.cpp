#include "dea/directions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dea/diagnostics.hpp"

namespace dea {

const char* to_string(DirectionStrategy s) {
  switch (s) {
    case DirectionStrategy::own_data: return "own_data";
    case DirectionStrategy::column_max: return "column_max";
    case DirectionStrategy::column_range: return "column_range";
    case DirectionStrategy::custom: return "custom";
    case DirectionStrategy::preset: return "preset";
  }
  return "unknown";
}

std::string DirectionProvenance::describe() const {
  std::ostringstream os;
  os << to_string(strategy);
  if (!preset.empty()) os << " (" << preset << ")";
  if (strategy == DirectionStrategy::column_max || strategy == DirectionStrategy::column_range ||
      strategy == DirectionStrategy::preset) {
    os << (include_self ? " over all DMUs" : " over reference set");
  }
  if (!weights.empty()) {
    os << ", weights (";
    for (std::size_t k = 0; k < weights.size(); ++k) os << (k ? ", " : "") << weights[k];
    os << ")";
  }
  return os.str();
}

namespace {

void check_components(const std::vector<double>& gm, const std::vector<double>& gp) {
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  if (std::any_of(gm.begin(), gm.end(), bad) || std::any_of(gp.begin(), gp.end(), bad)) {
    throw DirectionError("direction has a negative or non-finite component");
  }
  auto zero = [](double v) { return v == 0.0; };
  if (std::all_of(gm.begin(), gm.end(), zero) && std::all_of(gp.begin(), gp.end(), zero)) {
    throw DirectionError("direction is identically zero");
  }
}

}  // namespace

DirectionVector build_direction(const EvaluationContext& ctx, DirectionStrategy strategy, bool include_self) {
  const auto& d = ctx.dataset();
  const std::size_t o = ctx.unit();
  const std::size_t m = d.num_inputs();
  const std::size_t s = d.num_outputs();

  std::vector<std::size_t> rows = ctx.reference_set();
  if (include_self) {
    rows.clear();
    for (std::size_t j = 0; j < d.size(); ++j) rows.push_back(j);
  }

  DirectionVector g;
  g.provenance.strategy = strategy;
  g.provenance.include_self = include_self;
  g.g_minus.resize(m);
  g.g_plus.resize(s);

  auto column = [&](bool input, std::size_t k) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j : rows) {
      const double v = input ? d.input(k, j) : d.output(k, j);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    return std::pair{lo, hi};
  };

  switch (strategy) {
    case DirectionStrategy::own_data:
      g.g_minus = d.dmu(o).inputs;
      g.g_plus = d.dmu(o).outputs;
      break;
    case DirectionStrategy::column_max:
      for (std::size_t i = 0; i < m; ++i) g.g_minus[i] = column(true, i).second;
      for (std::size_t r = 0; r < s; ++r) g.g_plus[r] = column(false, r).second;
      break;
    case DirectionStrategy::column_range:
      for (std::size_t i = 0; i < m; ++i) {
        auto [lo, hi] = column(true, i);
        g.g_minus[i] = hi - lo;
      }
      for (std::size_t r = 0; r < s; ++r) {
        auto [lo, hi] = column(false, r);
        g.g_plus[r] = hi - lo;
      }
      break;
    case DirectionStrategy::custom:
    case DirectionStrategy::preset:
      throw DirectionError("build_direction: custom and preset directions are supplied explicitly");
  }
  try {
    check_components(g.g_minus, g.g_plus);
  } catch (const DirectionError& e) {
    throw DirectionError(std::string(to_string(strategy)) + " direction for DMU '" + d.dmu(o).name + "': " + e.what());
  }
  return g;
}

DirectionVector make_custom_direction(std::vector<double> g_minus, std::vector<double> g_plus) {
  check_components(g_minus, g_plus);
  DirectionVector g;
  g.g_minus = std::move(g_minus);
  g.g_plus = std::move(g_plus);
  g.provenance.strategy = DirectionStrategy::custom;
  return g;
}

DirectionVector apply_preference_weights(const DirectionVector& g, std::span<const double> weights) {
  const std::size_t m = g.g_minus.size();
  if (weights.size() != m + g.g_plus.size()) {
    throw DirectionError("expected " + std::to_string(m + g.g_plus.size()) + " weights, got " +
                         std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DirectionError("preference weights must be positive");
  }
  DirectionVector out = g;
  for (std::size_t i = 0; i < m; ++i) out.g_minus[i] /= weights[i];
  for (std::size_t r = 0; r < out.g_plus.size(); ++r) out.g_plus[r] /= weights[m + r];
  if (out.provenance.weights.empty()) {
    out.provenance.weights.assign(weights.begin(), weights.end());
  } else {
    for (std::size_t k = 0; k < weights.size(); ++k) out.provenance.weights[k] *= weights[k];
  }
  return out;
}

void check_dimensions(const EvaluationContext& ctx, const DirectionVector& g) {
  if (g.g_minus.size() != ctx.num_inputs() || g.g_plus.size() != ctx.num_outputs()) {
    throw DirectionError("direction has " + std::to_string(g.g_minus.size()) + "+" + std::to_string(g.g_plus.size()) +
                         " components, data has " + std::to_string(ctx.num_inputs()) + " inputs and " +
                         std::to_string(ctx.num_outputs()) + " outputs");
  }
}

DirectionReport validate_direction(const EvaluationContext& ctx, const DirectionVector& g) {
  check_dimensions(ctx, g);
  const auto& d = ctx.dataset();
  const std::size_t o = ctx.unit();
  DirectionReport rep;

  const auto sets = slack_index_sets(ctx);
  for (std::size_t i : sets.p) {
    if (!(g.g_minus[i] > 0.0)) rep.violating_inputs.push_back(i);
  }
  for (std::size_t r : sets.q) {
    if (!(g.g_plus[r] > 0.0)) rep.violating_outputs.push_back(r);
  }
  rep.necessary_ok = rep.violating_inputs.empty() && rep.violating_outputs.empty();

  constexpr double slack = 1e-12;
  for (std::size_t r = 0; r < d.num_outputs(); ++r) {
    const double gr = g.g_plus[r];
    if (!(gr > 0.0)) continue;
    const double yo = d.output(r, o);
    if (yo / gr > 1.0 + slack) rep.welldef_grs_ok = false;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j : ctx.reference_set()) lo = std::min(lo, d.output(r, j));
    if ((yo - lo) / gr > 1.0 + slack) rep.welldef_vrs_ok = false;
  }

  auto positive = [](double v) { return v > 0.0; };
  rep.guaranteed_feasible = std::all_of(g.g_minus.begin(), g.g_minus.end(), positive) &&
                            std::all_of(g.g_plus.begin(), g.g_plus.end(), positive);
  return rep;
}

std::string DirectionReport::necessary_diagnostic() const {
  if (necessary_ok) return {};
  std::ostringstream os;
  os << "[necessary-condition]";
  if (!violating_outputs.empty()) {
    os << " Q_o = " << format_index_set(violating_outputs, 'O') << " and";
    for (std::size_t k = 0; k < violating_outputs.size(); ++k) {
      os << (k ? "," : "") << " g+_" << violating_outputs[k] + 1 << " = 0";
    }
  }
  if (!violating_inputs.empty()) {
    if (!violating_outputs.empty()) os << ";";
    os << " P_o = " << format_index_set(violating_inputs, 'I') << " and";
    for (std::size_t k = 0; k < violating_inputs.size(); ++k) {
      os << (k ? "," : "") << " g-_" << violating_inputs[k] + 1 << " = 0";
    }
  }
  return os.str();
}

}  // namespace dea
