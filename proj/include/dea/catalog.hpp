#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/directions.hpp"
#include "dea/models.hpp"

namespace dea {

// Conventional super-efficiency models expressed as directional models with
// a fixed family, RTS, direction recipe and score transform.

enum class DirectionRecipe {
  own_data,              // (x_o, y_o)
  column_max,            // Max_j over the dataset
  column_range,          // Max_j - Min_j
  unit,                  // all ones (before scaling)
  efficient_column_max,  // Max_j over efficient DMUs only
  modified_ray,          // (a x_o + 1, b y_o + 1)
};

/// Multiplier applied to one block of a recipe.
enum class BlockScale {
  zero,            // block frozen (g = 0)
  one,
  inv_m,           // 1/m
  inv_s,           // 1/s
  m_plus_s_over_m, // (m+s)/m
  m_plus_s_over_s, // (m+s)/s
  inv_big_m,       // 1/M
};

enum class ScoreTransform {
  model_score,        // the family's own index (1+tau, rho_F, rho_L, psi, 1+sum tau-)
  objective,          // raw optimal objective; source index not pinned down here
  input_factor,       // 1 + mean tau-
  output_factor,      // 1 / (1 - mean tau+)
};

struct ModelPreset {
  std::string name;
  ModelFamily family;
  RtsSpec rts;
  DirectionRecipe recipe;
  BlockScale input_scale;
  BlockScale output_scale;
  bool enforce_output_nonneg = true;
  ScoreTransform transform = ScoreTransform::model_score;
  /// The reported index is not validated against published values.
  bool transform_unverified = false;
  /// The source model divides by x_o / y_o or is stated for positive data.
  bool requires_positive_data = false;
  std::optional<HybridPartition> partition;  // resolved against (m, s); SIZE_MAX means "all"
  HybridOptions hybrid;
  std::string source;  // which derivation table the row comes from
};

struct PresetParams {
  double big_m = 1e5;
  std::optional<double> ray_a;
  std::optional<double> ray_b;
};

class PresetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<ModelPreset>& preset_registry();

/// Throws PresetError for unknown names.
const ModelPreset& find_preset(std::string_view name);

/// A fully instantiated model run for one DMU.
struct ResolvedModel {
  const ModelPreset* preset = nullptr;
  ModelFamily family = ModelFamily::linear_gdse;
  EvaluationContext context;  // carries the preset's RTS
  DirectionVector direction;
  ModelOptions options;
  ScoreTransform transform = ScoreTransform::model_score;
  std::vector<std::string> notes;  // copied into the result's warnings
};

ResolvedModel resolve_preset(std::string_view name, const Dataset& dataset, std::size_t o,
                             const PresetParams& params = {});
/// Uses the context's dataset and unit; the preset's own RTS replaces the
/// context's.
ResolvedModel resolve_preset(std::string_view name, const EvaluationContext& ctx, const PresetParams& params = {});

/// Solves the resolved invocation. `weights` (inputs then outputs), when
/// given, rescale the preset direction before solving.
ScoreResult run_resolved(const ResolvedModel& model, std::span<const double> weights = {});

ScoreResult run_preset(std::string_view name, const EvaluationContext& ctx, const PresetParams& params = {});

/// Extreme-efficiency indicator used by M-MAJ: the Linear GDSE objective with
/// a strictly positive direction exceeds 1e-7.
std::vector<bool> extreme_efficient_units(const Dataset& dataset, const RtsSpec& rts);

/// Structural family check: input_radial is the g+ = 0 case of rdse and
/// input_nonradial the g+ = 0 case of linear_gdse.
bool is_instance_of(ModelFamily derived, ModelFamily base);

}  // namespace dea
