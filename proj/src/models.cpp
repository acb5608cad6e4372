#include "dea/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dea/charnes_cooper.hpp"

namespace dea {

const char* to_string(ScoreStatus s) {
  switch (s) {
    case ScoreStatus::optimal: return "optimal";
    case ScoreStatus::infeasible: return "infeasible";
    case ScoreStatus::undefined: return "undefined";
  }
  return "unknown";
}

const char* to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::rdse: return "rdse";
    case ModelFamily::fractional_gdse: return "fractional_gdse";
    case ModelFamily::linear_gdse: return "linear_gdse";
    case ModelFamily::hdse: return "hdse";
    case ModelFamily::input_radial: return "input_radial";
    case ModelFamily::input_nonradial: return "input_nonradial";
  }
  return "unknown";
}

std::optional<ModelFamily> parse_family(std::string_view name) {
  for (auto f : {ModelFamily::rdse, ModelFamily::fractional_gdse, ModelFamily::linear_gdse, ModelFamily::hdse,
                 ModelFamily::input_radial, ModelFamily::input_nonradial}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

namespace {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double SolutionBundle::lambda_sum() const { return std::accumulate(lambdas.begin(), lambdas.end(), 0.0); }
double SolutionBundle::mean_tau_minus() const { return mean(tau_minus); }
double SolutionBundle::mean_tau_plus() const { return mean(tau_plus); }

Projection project(const DmuRecord& unit, const DirectionVector& g, const SolutionBundle& bundle) {
  Projection p;
  p.inputs = unit.inputs;
  p.outputs = unit.outputs;
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (i < bundle.tau_minus.size() && i < g.g_minus.size()) p.inputs[i] += bundle.tau_minus[i] * g.g_minus[i];
  }
  for (std::size_t r = 0; r < p.outputs.size(); ++r) {
    if (r < bundle.tau_plus.size() && r < g.g_plus.size()) p.outputs[r] -= bundle.tau_plus[r] * g.g_plus[r];
  }
  return p;
}

std::optional<Decomposition> decompose(const SolutionBundle& bundle) {
  const double out_mean = bundle.mean_tau_plus();
  if (!(out_mean < 1.0)) return std::nullopt;
  return Decomposition{1.0 + bundle.mean_tau_minus(), 1.0 / (1.0 - out_mean)};
}

namespace {

using lp::LinearExpr;
using lp::LinearProgram;
using lp::Relation;
using lp::VarId;

// Envelopment rows shared by every family. A missing tau id means that
// component is held fixed.
struct Envelopment {
  std::vector<VarId> lambda;
  std::vector<std::optional<VarId>> tau_in;
  std::vector<std::optional<VarId>> tau_out;
};

std::vector<VarId> add_lambdas(LinearProgram& lp, const EvaluationContext& ctx) {
  std::vector<VarId> ids;
  for (std::size_t j : ctx.reference_set()) ids.push_back(lp.add_variable("lambda_" + ctx.dataset().dmu(j).name));
  return ids;
}

void add_envelopment_rows(LinearProgram& lp, const EvaluationContext& ctx, const DirectionVector& g,
                          const Envelopment& env) {
  const auto& d = ctx.dataset();
  const std::size_t o = ctx.unit();
  const auto& J = ctx.reference_set();
  for (std::size_t i = 0; i < d.num_inputs(); ++i) {
    LinearExpr e;
    for (std::size_t k = 0; k < J.size(); ++k) e.add(env.lambda[k], d.input(i, J[k]));
    if (env.tau_in[i]) e.add(*env.tau_in[i], -g.g_minus[i]);
    lp.add_constraint(std::move(e), Relation::less_equal, d.input(i, o), "input_" + std::to_string(i + 1));
  }
  for (std::size_t r = 0; r < d.num_outputs(); ++r) {
    LinearExpr e;
    for (std::size_t k = 0; k < J.size(); ++k) e.add(env.lambda[k], d.output(r, J[k]));
    if (env.tau_out[r]) e.add(*env.tau_out[r], g.g_plus[r]);
    lp.add_constraint(std::move(e), Relation::greater_equal, d.output(r, o), "output_" + std::to_string(r + 1));
  }
  const auto& rts = ctx.rts();
  LinearExpr sum;
  for (VarId v : env.lambda) sum.add(v, 1.0);
  if (rts.upper && *rts.upper == rts.lower) {
    lp.add_constraint(sum, Relation::equal, rts.lower, "rts");
  } else {
    if (rts.lower > 0.0) lp.add_constraint(sum, Relation::greater_equal, rts.lower, "rts_lower");
    if (rts.upper) lp.add_constraint(sum, Relation::less_equal, *rts.upper, "rts_upper");
  }
}

SolutionBundle read_bundle(const Envelopment& env, const std::vector<double>& values, lp::LpStatus status) {
  SolutionBundle b;
  b.lp_status = status;
  for (VarId v : env.lambda) b.lambdas.push_back(values[v]);
  for (const auto& t : env.tau_in) b.tau_minus.push_back(t ? values[*t] : 0.0);
  for (const auto& t : env.tau_out) b.tau_plus.push_back(t ? values[*t] : 0.0);
  return b;
}

void flag_negative_projection(ScoreResult& res) {
  for (std::size_t r = 0; r < res.projection.outputs.size(); ++r) {
    if (res.projection.outputs[r] < -1e-9) {
      std::ostringstream os;
      os << "[negative-projection] projected output O" << r + 1 << " = " << res.projection.outputs[r]
         << " lies outside the technology";
      res.warnings.push_back(os.str());
    }
  }
}

void explain_infeasible(ScoreResult& res, const EvaluationContext& ctx, const DirectionVector& g) {
  const auto rep = validate_direction(ctx, g);
  if (!rep.necessary_ok) {
    res.warnings.push_back(rep.necessary_diagnostic());
    return;
  }
  const auto sets = slack_index_sets(ctx);
  if (ctx.rts().is_crs() && !sets.q.empty()) {
    res.warnings.push_back("[crs-feasibility] Q_o = " + format_index_set(sets.q, 'O') + " is non-empty");
    return;
  }
  res.warnings.push_back("[lp] no feasible point for this direction and RTS");
}

void warn_well_definedness(ScoreResult& res, const EvaluationContext& ctx, const DirectionVector& g) {
  const auto rep = validate_direction(ctx, g);
  if (!rep.well_defined_for(ctx.rts())) {
    res.warnings.push_back(
        "[well-definedness] direction fails max_r y_ro/g+_r <= 1 (and the VRS variant); the index may fall below 1");
  }
}

void handle_unbounded(ScoreResult& res) {
  res.status = ScoreStatus::undefined;
  res.warnings.push_back("[lp] objective unbounded below for this direction");
}

ScoreResult radial(const EvaluationContext& ctx, const DirectionVector& g, bool enforce_output_nonneg,
                   ModelFamily family) {
  check_dimensions(ctx, g);
  ScoreResult res;
  res.family = family;

  LinearProgram lp;
  Envelopment env;
  env.lambda = add_lambdas(lp, ctx);
  const VarId tau = lp.add_variable("tau", -lp::kInf, lp::kInf);
  env.tau_in.assign(ctx.num_inputs(), tau);
  if (family == ModelFamily::input_radial) {
    env.tau_out.assign(ctx.num_outputs(), std::nullopt);
  } else {
    env.tau_out.assign(ctx.num_outputs(), tau);
  }
  add_envelopment_rows(lp, ctx, g, env);
  if (enforce_output_nonneg && family == ModelFamily::rdse) {
    for (std::size_t r = 0; r < ctx.num_outputs(); ++r) {
      LinearExpr e;
      e.add(tau, g.g_plus[r]);
      lp.add_constraint(std::move(e), Relation::less_equal, ctx.evaluated().outputs[r],
                        "nonneg_output_" + std::to_string(r + 1));
    }
  }
  LinearExpr obj;
  obj.constant = 1.0;
  obj.add(tau, 1.0);
  lp.set_objective(obj);

  const auto out = lp::solve_lp(lp);
  res.bundle.lp_status = out.status;
  if (out.status == lp::LpStatus::infeasible) {
    res.status = ScoreStatus::infeasible;
    explain_infeasible(res, ctx, g);
    return res;
  }
  if (out.status == lp::LpStatus::unbounded) {
    handle_unbounded(res);
    return res;
  }
  res.bundle = read_bundle(env, out.values, out.status);
  res.bundle.tau_radial = out.values[tau];
  res.status = ScoreStatus::optimal;
  res.objective_value = out.objective;
  res.score = out.objective;
  res.projection = project(ctx.evaluated(), g, res.bundle);
  flag_negative_projection(res);
  return res;
}

// Linear GDSE / HDSE core. `share_in`/`share_out` give the number of leading
// components tied to one radial factor.
struct AdditiveModel {
  LinearProgram lp;
  Envelopment env;
  LinearExpr objective;
};

AdditiveModel build_additive(const EvaluationContext& ctx, const DirectionVector& g, HybridPartition part,
                             HybridOptions opts) {
  AdditiveModel am;
  const std::size_t m = ctx.num_inputs();
  const std::size_t s = ctx.num_outputs();
  am.env.lambda = add_lambdas(am.lp, ctx);
  const double in_lo = opts.free_input_adjustment ? -lp::kInf : 0.0;
  const double out_lo = opts.free_output_adjustment ? -lp::kInf : 0.0;

  std::optional<VarId> radial_in;
  std::optional<VarId> radial_out;
  if (part.radial_inputs > 0) radial_in = am.lp.add_variable("tau_minus_radial", in_lo);
  if (part.radial_outputs > 0) radial_out = am.lp.add_variable("tau_plus_radial", out_lo);
  for (std::size_t i = 0; i < m; ++i) {
    am.env.tau_in.push_back(i < part.radial_inputs ? radial_in
                                                   : am.lp.add_variable("tau_minus_" + std::to_string(i + 1), in_lo));
  }
  for (std::size_t r = 0; r < s; ++r) {
    am.env.tau_out.push_back(r < part.radial_outputs ? radial_out
                                                     : am.lp.add_variable("tau_plus_" + std::to_string(r + 1), out_lo));
  }
  add_envelopment_rows(am.lp, ctx, g, am.env);
  for (std::size_t i = 0; i < m; ++i) am.objective.add(*am.env.tau_in[i], 1.0 / static_cast<double>(m));
  for (std::size_t r = 0; r < s; ++r) am.objective.add(*am.env.tau_out[r], 1.0 / static_cast<double>(s));
  am.lp.set_objective(am.objective);
  return am;
}

double index_from(double mean_in, double mean_out) { return (1.0 + mean_in) / (1.0 - mean_out); }

// Scans the optimal face for the spread of (1 + mean tau-)/(1 - mean tau+).
void check_alternative_optima(ScoreResult& res, const AdditiveModel& am, double phi, const char* label) {
  LinearProgram face = am.lp;
  const double slack = 1e-9 * std::max(1.0, std::abs(phi));
  face.add_constraint(am.objective, Relation::less_equal, phi + slack, "optimal_face");
  LinearExpr in_mean;
  const double m = static_cast<double>(am.env.tau_in.size());
  for (const auto& t : am.env.tau_in) in_mean.add(*t, 1.0 / m);

  double lo = res.score;
  double hi = res.score;
  for (double sign : {1.0, -1.0}) {
    LinearExpr obj;
    for (const auto& t : in_mean.terms) obj.add(t.var, sign * t.coef);
    face.set_objective(obj);
    const auto out = lp::solve_lp(face);
    if (out.status != lp::LpStatus::optimal) continue;
    const double a = in_mean.evaluate(out.values);
    const double b = phi - a;
    if (!(b < 1.0)) continue;
    const double idx = index_from(a, b);
    lo = std::min(lo, idx);
    hi = std::max(hi, idx);
  }
  if (hi - lo > 1e-6) {
    std::ostringstream os;
    os << "[alternative-optimum] " << label << " ranges over [" << lo << ", " << hi
       << "] across optimal solutions; reported value comes from the solver's vertex";
    res.warnings.push_back(os.str());
  }
}

ScoreResult additive(const EvaluationContext& ctx, const DirectionVector& g, HybridPartition part, HybridOptions opts,
                     ModelFamily family) {
  check_dimensions(ctx, g);
  ScoreResult res;
  res.family = family;
  auto am = build_additive(ctx, g, part, opts);
  const auto out = lp::solve_lp(am.lp);
  res.bundle.lp_status = out.status;
  if (out.status == lp::LpStatus::infeasible) {
    res.status = ScoreStatus::infeasible;
    explain_infeasible(res, ctx, g);
    return res;
  }
  if (out.status == lp::LpStatus::unbounded) {
    handle_unbounded(res);
    return res;
  }
  res.bundle = read_bundle(am.env, out.values, out.status);
  res.objective_value = out.objective;
  res.projection = project(ctx.evaluated(), g, res.bundle);
  flag_negative_projection(res);
  warn_well_definedness(res, ctx, g);

  const double mean_out = res.bundle.mean_tau_plus();
  if (!(mean_out < 1.0)) {
    res.status = ScoreStatus::undefined;
    res.warnings.push_back("[well-definedness] mean output contraction >= 1; the index has no positive denominator");
    return res;
  }
  res.status = ScoreStatus::optimal;
  res.score = index_from(res.bundle.mean_tau_minus(), mean_out);
  res.decomposition = decompose(res.bundle);
  check_alternative_optima(res, am, out.objective, family == ModelFamily::hdse ? "psi" : "rho_L");
  return res;
}

void warn_hybrid_positivity(ScoreResult& res, const EvaluationContext& ctx, HybridPartition part) {
  const auto& d = ctx.dataset();
  bool ok = true;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t i = 0; i < part.radial_inputs; ++i) ok = ok && d.input(i, j) > 0.0;
    for (std::size_t r = 0; r < part.radial_outputs; ++r) ok = ok && d.output(r, j) > 0.0;
  }
  if (!ok) res.warnings.push_back("[hybrid-partition] radial block contains non-positive data");
}

}  // namespace

ScoreResult solve_rdse(const EvaluationContext& ctx, const DirectionVector& g, bool enforce_output_nonneg) {
  return radial(ctx, g, enforce_output_nonneg, ModelFamily::rdse);
}

ScoreResult solve_input_radial(const EvaluationContext& ctx, std::span<const double> g_minus) {
  auto g = make_custom_direction({g_minus.begin(), g_minus.end()}, std::vector<double>(ctx.num_outputs(), 0.0));
  return radial(ctx, g, false, ModelFamily::input_radial);
}

ScoreResult solve_linear_gdse(const EvaluationContext& ctx, const DirectionVector& g) {
  return additive(ctx, g, {}, {}, ModelFamily::linear_gdse);
}

ScoreResult solve_hdse(const EvaluationContext& ctx, const DirectionVector& g, HybridPartition partition,
                       HybridOptions options) {
  if (partition.radial_inputs > ctx.num_inputs() || partition.radial_outputs > ctx.num_outputs()) {
    throw std::invalid_argument("hybrid partition exceeds the data dimensions");
  }
  auto res = additive(ctx, g, partition, options, ModelFamily::hdse);
  warn_hybrid_positivity(res, ctx, partition);
  if (res.bundle.lp_status == lp::LpStatus::optimal) {
    if (partition.radial_inputs > 0) res.bundle.tau_radial = res.bundle.tau_minus.front();
  }
  return res;
}

ScoreResult solve_input_nonradial(const EvaluationContext& ctx, std::span<const double> g_minus) {
  auto g = make_custom_direction({g_minus.begin(), g_minus.end()}, std::vector<double>(ctx.num_outputs(), 0.0));
  check_dimensions(ctx, g);
  ScoreResult res;
  res.family = ModelFamily::input_nonradial;

  LinearProgram lp;
  Envelopment env;
  env.lambda = add_lambdas(lp, ctx);
  LinearExpr obj;
  obj.constant = 1.0;
  for (std::size_t i = 0; i < ctx.num_inputs(); ++i) {
    const VarId t = lp.add_variable("tau_minus_" + std::to_string(i + 1));
    env.tau_in.push_back(t);
    obj.add(t, 1.0);
  }
  env.tau_out.assign(ctx.num_outputs(), std::nullopt);
  add_envelopment_rows(lp, ctx, g, env);
  lp.set_objective(obj);

  const auto out = lp::solve_lp(lp);
  res.bundle.lp_status = out.status;
  if (out.status == lp::LpStatus::infeasible) {
    res.status = ScoreStatus::infeasible;
    explain_infeasible(res, ctx, g);
    return res;
  }
  if (out.status == lp::LpStatus::unbounded) {
    handle_unbounded(res);
    return res;
  }
  res.bundle = read_bundle(env, out.values, out.status);
  res.status = ScoreStatus::optimal;
  res.objective_value = out.objective;
  res.score = out.objective;
  res.projection = project(ctx.evaluated(), g, res.bundle);
  res.decomposition = decompose(res.bundle);
  return res;
}

ScoreResult solve_fractional_gdse(const EvaluationContext& ctx, const DirectionVector& g) {
  check_dimensions(ctx, g);
  ScoreResult res;
  res.family = ModelFamily::fractional_gdse;
  const std::size_t m = ctx.num_inputs();
  const std::size_t s = ctx.num_outputs();

  lp::FractionalProgram fp;
  Envelopment env;
  env.lambda = add_lambdas(fp.feasible_set, ctx);
  fp.numerator.constant = 1.0;
  fp.denominator.constant = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const VarId t = fp.feasible_set.add_variable("tau_minus_" + std::to_string(i + 1));
    env.tau_in.push_back(t);
    fp.numerator.add(t, 1.0 / static_cast<double>(m));
  }
  for (std::size_t r = 0; r < s; ++r) {
    const VarId t = fp.feasible_set.add_variable("tau_plus_" + std::to_string(r + 1));
    env.tau_out.push_back(t);
    fp.denominator.add(t, -1.0 / static_cast<double>(s));
  }
  add_envelopment_rows(fp.feasible_set, ctx, g, env);

  const auto cc = lp::charnes_cooper_linearize(fp);
  const auto out = lp::solve_lp(cc.lp);
  res.bundle.lp_status = out.status;
  if (out.status != lp::LpStatus::optimal) {
    // Tell an empty constraint set apart from one where the denominator can
    // never be kept positive.
    const auto plain = lp::solve_lp(fp.feasible_set);
    if (plain.status == lp::LpStatus::infeasible) {
      res.status = ScoreStatus::infeasible;
      explain_infeasible(res, ctx, g);
    } else {
      res.status = ScoreStatus::undefined;
      res.warnings.push_back("[well-definedness] no feasible point keeps 1 - mean(tau+) positive");
    }
    return res;
  }
  std::vector<double> values;
  try {
    values = cc.recover(out.values);
  } catch (const lp::DenominatorDegeneracy& e) {
    res.status = ScoreStatus::undefined;
    res.warnings.push_back(std::string("[well-definedness] ") + e.what());
    return res;
  }
  res.bundle = read_bundle(env, values, out.status);
  res.objective_value = out.objective;
  res.projection = project(ctx.evaluated(), g, res.bundle);
  flag_negative_projection(res);
  warn_well_definedness(res, ctx, g);
  res.decomposition = decompose(res.bundle);
  if (!res.decomposition) {
    res.status = ScoreStatus::undefined;
    res.warnings.push_back("[well-definedness] mean output contraction >= 1 at the recovered optimum");
    return res;
  }
  res.status = ScoreStatus::optimal;
  res.score = res.decomposition->product();
  return res;
}

ScoreResult solve_model(ModelFamily family, const EvaluationContext& ctx, const DirectionVector& g,
                        const ModelOptions& options) {
  switch (family) {
    case ModelFamily::rdse: return solve_rdse(ctx, g, options.enforce_output_nonneg);
    case ModelFamily::fractional_gdse: return solve_fractional_gdse(ctx, g);
    case ModelFamily::linear_gdse: return solve_linear_gdse(ctx, g);
    case ModelFamily::hdse: return solve_hdse(ctx, g, options.partition, options.hybrid);
    case ModelFamily::input_radial: return solve_input_radial(ctx, g.g_minus);
    case ModelFamily::input_nonradial: return solve_input_nonradial(ctx, g.g_minus);
  }
  throw std::invalid_argument("unknown model family");
}

}  // namespace dea
