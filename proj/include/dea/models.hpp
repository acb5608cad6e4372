#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/diagnostics.hpp"
#include "dea/directions.hpp"
#include "dea/lp.hpp"

namespace dea {

enum class ScoreStatus { optimal, infeasible, undefined };

enum class ModelFamily {
  rdse,             // radial directional, free-sign tau
  fractional_gdse,  // ratio objective, solved through Charnes-Cooper
  linear_gdse,      // additive objective, rho_L read off the optimum
  hdse,             // radial blocks + non-radial remainder
  input_radial,     // rdse with g+ = 0, outputs held at y_o
  input_nonradial,  // linear gdse with g+ = 0, score 1 + sum(tau-)
};

const char* to_string(ScoreStatus s);
const char* to_string(ModelFamily f);
std::optional<ModelFamily> parse_family(std::string_view name);

/// Optimal intensity weights and adjustment factors. `tau_minus`/`tau_plus`
/// always hold the effective per-component factor, so a radial solution
/// repeats its scalar in every slot that has a non-zero direction.
struct SolutionBundle {
  std::vector<double> lambdas;  // aligned with EvaluationContext::reference_set()
  std::optional<double> tau_radial;
  std::vector<double> tau_minus;
  std::vector<double> tau_plus;
  lp::LpStatus lp_status = lp::LpStatus::infeasible;

  double lambda_sum() const;
  double mean_tau_minus() const;
  double mean_tau_plus() const;
};

struct Projection {
  std::vector<double> inputs;
  std::vector<double> outputs;
};

/// Average input-side expansion rate times average output-side contraction
/// rate.
struct Decomposition {
  double input_factor = 1.0;
  double output_factor = 1.0;
  double product() const { return input_factor * output_factor; }
};

struct ScoreResult {
  ModelFamily family = ModelFamily::linear_gdse;
  ScoreStatus status = ScoreStatus::infeasible;
  double score = std::numeric_limits<double>::quiet_NaN();
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  SolutionBundle bundle;
  Projection projection;
  std::optional<Decomposition> decomposition;
  /// Each entry starts with a bracketed tag naming its diagnostic source.
  std::vector<std::string> warnings;

  bool optimal() const noexcept { return status == ScoreStatus::optimal; }
};

/// The first `radial_inputs` inputs share one expansion factor and the first
/// `radial_outputs` outputs share one contraction factor.
struct HybridPartition {
  std::size_t radial_inputs = 0;
  std::size_t radial_outputs = 0;
};

/// Sign relaxations used by the big-M oriented derivations.
struct HybridOptions {
  bool free_input_adjustment = false;
  bool free_output_adjustment = false;
};

ScoreResult solve_rdse(const EvaluationContext& ctx, const DirectionVector& g, bool enforce_output_nonneg);
ScoreResult solve_fractional_gdse(const EvaluationContext& ctx, const DirectionVector& g);
ScoreResult solve_linear_gdse(const EvaluationContext& ctx, const DirectionVector& g);
ScoreResult solve_hdse(const EvaluationContext& ctx, const DirectionVector& g, HybridPartition partition,
                       HybridOptions options = {});
ScoreResult solve_input_radial(const EvaluationContext& ctx, std::span<const double> g_minus);
ScoreResult solve_input_nonradial(const EvaluationContext& ctx, std::span<const double> g_minus);

/// Options consulted by `solve_model` for the families that use them.
struct ModelOptions {
  bool enforce_output_nonneg = true;
  HybridPartition partition;
  HybridOptions hybrid;
};

ScoreResult solve_model(ModelFamily family, const EvaluationContext& ctx, const DirectionVector& g,
                        const ModelOptions& options = {});

/// x_o + tau- * g-, y_o - tau+ * g+ (componentwise).
Projection project(const DmuRecord& unit, const DirectionVector& g, const SolutionBundle& bundle);

/// (1 + mean tau-, 1 / (1 - mean tau+)); nullopt when mean tau+ >= 1.
std::optional<Decomposition> decompose(const SolutionBundle& bundle);

}  // namespace dea
