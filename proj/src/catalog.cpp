#include "dea/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace dea {

namespace {

constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

ModelPreset make(std::string name, ModelFamily family, RtsSpec rts, DirectionRecipe recipe, BlockScale in,
                 BlockScale out, std::string source) {
  ModelPreset p{};
  p.name = std::move(name);
  p.family = family;
  p.rts = rts;
  p.recipe = recipe;
  p.input_scale = in;
  p.output_scale = out;
  p.source = std::move(source);
  return p;
}

std::vector<ModelPreset> build_registry() {
  using F = ModelFamily;
  using R = DirectionRecipe;
  using B = BlockScale;
  const auto crs = RtsSpec::crs();
  const auto vrs = RtsSpec::vrs();
  const std::string radial = "radial directional (RDSE) derivations";
  const std::string fractional = "fractional GDSE derivations";
  const std::string linear = "linear GDSE derivations";
  const std::string hybrid = "hybrid / big-M derivations";

  std::vector<ModelPreset> v;
  v.push_back(make("AP", F::input_radial, crs, R::own_data, B::one, B::zero, radial));
  v.push_back(make("MAJ", F::input_radial, crs, R::column_max, B::one, B::zero, radial));
  v.push_back(make("M-MAJ", F::input_radial, crs, R::efficient_column_max, B::one, B::zero, radial));
  v.push_back(make("R-MAJ", F::rdse, crs, R::column_max, B::one, B::one, radial));
  v.back().enforce_output_nonneg = false;
  v.push_back(make("Ray", F::rdse, vrs, R::own_data, B::one, B::one, radial));
  v.back().enforce_output_nonneg = false;
  v.push_back(make("M-Ray", F::rdse, vrs, R::modified_ray, B::one, B::one, radial));
  v.back().enforce_output_nonneg = false;

  v.push_back(make("Super-SBM-C", F::fractional_gdse, crs, R::own_data, B::one, B::one, fractional));
  v.back().requires_positive_data = true;
  v.push_back(make("Super-SBM-C(I)", F::fractional_gdse, crs, R::column_max, B::one, B::one, fractional));
  v.push_back(make("Super-SBM-C(II)", F::fractional_gdse, RtsSpec{1.0, std::nullopt}, R::column_range, B::one, B::one,
                   fractional));
  v.push_back(make("Super-SBM-I", F::fractional_gdse, crs, R::own_data, B::one, B::zero, fractional));
  v.back().requires_positive_data = true;
  v.push_back(make("Super-SBM-V", F::fractional_gdse, vrs, R::own_data, B::one, B::one, fractional));
  v.back().requires_positive_data = true;
  v.push_back(make("Super-SBM-I-V", F::fractional_gdse, vrs, R::own_data, B::one, B::zero, fractional));
  v.back().requires_positive_data = true;
  v.push_back(make("Super-ERM", F::fractional_gdse, crs, R::own_data, B::one, B::one, fractional));
  v.back().requires_positive_data = true;

  v.push_back(make("LJK", F::input_nonradial, crs, R::column_max, B::one, B::zero, linear));
  auto unverified = [&](ModelPreset p) {
    p.transform = ScoreTransform::objective;
    p.transform_unverified = true;
    return p;
  };
  v.push_back(unverified(make("Norm1", F::linear_gdse, crs, R::column_max, B::inv_m, B::inv_s, linear)));
  v.push_back(unverified(make("Norm1-V", F::linear_gdse, vrs, R::column_max, B::inv_m, B::inv_s, linear)));
  v.push_back(unverified(make("Super-Add(I)", F::linear_gdse, crs, R::unit, B::inv_m, B::inv_s, linear)));
  v.push_back(
      unverified(make("Super-Add(II)", F::linear_gdse, crs, R::own_data, B::m_plus_s_over_m, B::m_plus_s_over_m, linear)));
  v.back().requires_positive_data = true;
  v.push_back(unverified(
      make("Super-Add(III)", F::linear_gdse, crs, R::column_max, B::m_plus_s_over_m, B::m_plus_s_over_s, linear)));
  v.push_back(unverified(
      make("Super-Add(IV)", F::linear_gdse, crs, R::column_range, B::m_plus_s_over_m, B::m_plus_s_over_m, linear)));

  auto hdse = [&](std::string name, B in, B out, HybridPartition part, HybridOptions opts, ScoreTransform tr) {
    auto p = make(std::move(name), F::hdse, vrs, R::own_data, in, out, hybrid);
    p.partition = part;
    p.hybrid = opts;
    p.transform = tr;
    p.transform_unverified = true;
    return p;
  };
  v.push_back(hdse("Chen2011", B::one, B::one, {kAll, kAll}, {}, ScoreTransform::model_score));
  v.back().requires_positive_data = true;
  v.push_back(hdse("Cook2009-I", B::one, B::inv_big_m, {kAll, kAll}, {true, false}, ScoreTransform::input_factor));
  v.push_back(hdse("Cook2009-O", B::inv_big_m, B::one, {kAll, kAll}, {false, true}, ScoreTransform::output_factor));
  v.push_back(hdse("ChenLiang2011-I", B::one, B::inv_big_m, {kAll, 0}, {true, false}, ScoreTransform::input_factor));
  v.push_back(hdse("ChenLiang2011-O", B::inv_big_m, B::one, {0, kAll}, {false, true}, ScoreTransform::output_factor));
  return v;
}

double block_factor(BlockScale b, std::size_t m, std::size_t s, double big_m) {
  const double dm = static_cast<double>(m);
  const double ds = static_cast<double>(s);
  switch (b) {
    case BlockScale::zero: return 0.0;
    case BlockScale::one: return 1.0;
    case BlockScale::inv_m: return 1.0 / dm;
    case BlockScale::inv_s: return 1.0 / ds;
    case BlockScale::m_plus_s_over_m: return (dm + ds) / dm;
    case BlockScale::m_plus_s_over_s: return (dm + ds) / ds;
    case BlockScale::inv_big_m: return 1.0 / big_m;
  }
  return 1.0;
}

std::pair<std::vector<double>, std::vector<double>> column_max_over(const Dataset& d,
                                                                    const std::vector<std::size_t>& rows) {
  std::vector<double> gm(d.num_inputs(), -std::numeric_limits<double>::infinity());
  std::vector<double> gp(d.num_outputs(), -std::numeric_limits<double>::infinity());
  for (std::size_t j : rows) {
    for (std::size_t i = 0; i < gm.size(); ++i) gm[i] = std::max(gm[i], d.input(i, j));
    for (std::size_t r = 0; r < gp.size(); ++r) gp[r] = std::max(gp[r], d.output(r, j));
  }
  return {gm, gp};
}

}  // namespace

const std::vector<ModelPreset>& preset_registry() {
  static const std::vector<ModelPreset> registry = build_registry();
  return registry;
}

const ModelPreset& find_preset(std::string_view name) {
  // Accept the "(M)" suffix that marks the big-M parameter in some listings.
  std::string key(name);
  if (key.size() > 3 && key.ends_with("(M)")) key.resize(key.size() - 3);
  for (const auto& p : preset_registry()) {
    if (p.name == key) return p;
  }
  throw PresetError("unknown preset '" + std::string(name) + "'");
}

bool is_instance_of(ModelFamily derived, ModelFamily base) {
  if (derived == base) return true;
  if (base == ModelFamily::rdse) return derived == ModelFamily::input_radial;
  if (base == ModelFamily::linear_gdse) return derived == ModelFamily::input_nonradial;
  return false;
}

std::vector<bool> extreme_efficient_units(const Dataset& dataset, const RtsSpec& rts) {
  std::vector<bool> eff(dataset.size(), false);
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    const auto ctx = make_context(dataset, j, rts);
    auto g = build_direction(ctx, DirectionStrategy::column_max, true);
    for (auto& v : g.g_minus) {
      if (!(v > 0.0)) v = 1.0;
    }
    for (auto& v : g.g_plus) {
      if (!(v > 0.0)) v = 1.0;
    }
    const auto res = solve_linear_gdse(ctx, g);
    eff[j] = res.bundle.lp_status == lp::LpStatus::optimal && res.objective_value > 1e-7;
  }
  return eff;
}

ResolvedModel resolve_preset(std::string_view name, const Dataset& dataset, std::size_t o,
                             const PresetParams& params) {
  const ModelPreset& p = find_preset(name);
  if (!(params.big_m > 0.0) || !std::isfinite(params.big_m)) throw PresetError("big-M must be positive and finite");

  ResolvedModel rm{&p, p.family, make_context(dataset, o, p.rts), {}, {}, p.transform, {}};
  const std::size_t m = dataset.num_inputs();
  const std::size_t s = dataset.num_outputs();
  const auto& unit = dataset.dmu(o);

  std::vector<double> gm;
  std::vector<double> gp;
  switch (p.recipe) {
    case DirectionRecipe::own_data:
      gm = unit.inputs;
      gp = unit.outputs;
      break;
    case DirectionRecipe::column_max:
    case DirectionRecipe::column_range: {
      // Build unscaled statistics directly: a frozen block may legitimately
      // be zero even when build_direction would reject the whole vector.
      std::vector<std::size_t> all(dataset.size());
      for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
      auto [hi_m, hi_p] = column_max_over(dataset, all);
      gm = hi_m;
      gp = hi_p;
      if (p.recipe == DirectionRecipe::column_range) {
        for (std::size_t i = 0; i < m; ++i) {
          double lo = std::numeric_limits<double>::infinity();
          for (std::size_t j : all) lo = std::min(lo, dataset.input(i, j));
          gm[i] -= lo;
        }
        for (std::size_t r = 0; r < s; ++r) {
          double lo = std::numeric_limits<double>::infinity();
          for (std::size_t j : all) lo = std::min(lo, dataset.output(r, j));
          gp[r] -= lo;
        }
      }
      break;
    }
    case DirectionRecipe::unit:
      gm.assign(m, 1.0);
      gp.assign(s, 1.0);
      break;
    case DirectionRecipe::efficient_column_max: {
      const auto eff = extreme_efficient_units(dataset, p.rts);
      std::vector<std::size_t> rows;
      for (std::size_t j = 0; j < eff.size(); ++j) {
        if (eff[j]) rows.push_back(j);
      }
      if (rows.empty()) {
        rm.notes.push_back("[efficiency-prepass] no extreme-efficient DMU found; using all DMUs");
        for (std::size_t j = 0; j < dataset.size(); ++j) rows.push_back(j);
      }
      std::tie(gm, gp) = column_max_over(dataset, rows);
      break;
    }
    case DirectionRecipe::modified_ray:
      if (!params.ray_a || !params.ray_b) throw PresetError("M-Ray needs user-supplied parameters a and b");
      gm = unit.inputs;
      gp = unit.outputs;
      for (auto& x : gm) x = *params.ray_a * x + 1.0;
      for (auto& y : gp) y = *params.ray_b * y + 1.0;
      break;
  }

  const double fin = block_factor(p.input_scale, m, s, params.big_m);
  const double fout = block_factor(p.output_scale, m, s, params.big_m);
  for (auto& x : gm) x *= fin;
  for (auto& y : gp) y *= fout;
  try {
    rm.direction = make_custom_direction(std::move(gm), std::move(gp));
  } catch (const DirectionError& e) {
    throw PresetError(p.name + " direction for DMU '" + unit.name + "': " + e.what());
  }
  rm.direction.provenance.strategy = DirectionStrategy::preset;
  rm.direction.provenance.preset = p.name;
  rm.direction.provenance.include_self = true;

  rm.options.enforce_output_nonneg = p.enforce_output_nonneg;
  if (p.partition) {
    rm.options.partition.radial_inputs = std::min(p.partition->radial_inputs, m);
    rm.options.partition.radial_outputs = std::min(p.partition->radial_outputs, s);
  }
  rm.options.hybrid = p.hybrid;
  return rm;
}

ResolvedModel resolve_preset(std::string_view name, const EvaluationContext& ctx, const PresetParams& params) {
  return resolve_preset(name, ctx.dataset(), ctx.unit(), params);
}

namespace {

std::string positive_data_issue(const ModelPreset& p, const DmuRecord& unit) {
  std::string where;
  if (p.input_scale != BlockScale::zero) {
    for (std::size_t i = 0; i < unit.inputs.size(); ++i) {
      if (!(unit.inputs[i] > 0.0)) where += " I" + std::to_string(i + 1);
    }
  }
  if (p.output_scale != BlockScale::zero) {
    for (std::size_t r = 0; r < unit.outputs.size(); ++r) {
      if (!(unit.outputs[r] > 0.0)) where += " O" + std::to_string(r + 1);
    }
  }
  return where;
}

}  // namespace

ScoreResult run_resolved(const ResolvedModel& model, std::span<const double> weights) {
  const ModelPreset& p = *model.preset;
  const auto& ctx = model.context;

  if (p.requires_positive_data) {
    const auto where = positive_data_issue(p, ctx.evaluated());
    if (!where.empty()) {
      ScoreResult res;
      res.family = model.family;
      res.status = ScoreStatus::undefined;
      res.warnings = model.notes;
      res.warnings.push_back("[positive-data] " + p.name + " requires positive data; zero or negative value in" + where);
      return res;
    }
  }

  DirectionVector g = model.direction;
  if (!weights.empty()) g = apply_preference_weights(g, weights);

  ScoreResult res = solve_model(model.family, ctx, g, model.options);
  res.warnings.insert(res.warnings.begin(), model.notes.begin(), model.notes.end());

  const bool have_bundle = res.bundle.lp_status == lp::LpStatus::optimal && !res.bundle.tau_minus.empty();
  switch (model.transform) {
    case ScoreTransform::model_score:
      break;
    case ScoreTransform::objective:
      if (have_bundle && std::isfinite(res.objective_value)) {
        res.status = ScoreStatus::optimal;
        res.score = res.objective_value;
      }
      break;
    case ScoreTransform::input_factor:
      if (have_bundle) {
        res.status = ScoreStatus::optimal;
        res.score = 1.0 + res.bundle.mean_tau_minus();
      }
      break;
    case ScoreTransform::output_factor:
      if (have_bundle) {
        const double b = res.bundle.mean_tau_plus();
        if (b < 1.0) {
          res.status = ScoreStatus::optimal;
          res.score = 1.0 / (1.0 - b);
        } else {
          res.status = ScoreStatus::undefined;
        }
      }
      break;
  }
  if (p.transform_unverified && res.status == ScoreStatus::optimal) {
    res.warnings.push_back("[transform-unverified] " + p.name +
                           " reports the directional model's value; the source index formula is not reproduced");
  }
  return res;
}

ScoreResult run_preset(std::string_view name, const EvaluationContext& ctx, const PresetParams& params) {
  return run_resolved(resolve_preset(name, ctx, params));
}

}  // namespace dea
