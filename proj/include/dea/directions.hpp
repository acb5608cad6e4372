#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dea/dataset.hpp"

namespace dea {

enum class DirectionStrategy {
  own_data,      // g = (x_o, y_o)
  column_max,    // columnwise maximum
  column_range,  // columnwise max - min
  custom,
  preset,        // built by a catalog recipe
};

const char* to_string(DirectionStrategy s);

struct DirectionProvenance {
  DirectionStrategy strategy = DirectionStrategy::custom;
  bool include_self = true;
  std::vector<double> weights;  // empty: unweighted
  std::string preset;

  std::string describe() const;
};

/// Expansion direction g- for inputs and contraction direction g+ for
/// outputs. Components are non-negative and not all zero.
struct DirectionVector {
  std::vector<double> g_minus;
  std::vector<double> g_plus;
  DirectionProvenance provenance;
};

class DirectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data-driven direction for the unit in `ctx`. Column statistics run over
/// every DMU when `include_self` is set, otherwise over the reference set J.
DirectionVector build_direction(const EvaluationContext& ctx, DirectionStrategy strategy, bool include_self = true);

/// Checks signs and that the direction is not identically zero.
DirectionVector make_custom_direction(std::vector<double> g_minus, std::vector<double> g_plus);

/// Divides each component by its weight: a heavier weight shrinks the
/// direction, so adjusting that dimension costs more.
/// Weights are ordered inputs first, then outputs.
DirectionVector apply_preference_weights(const DirectionVector& g, std::span<const double> weights);

struct DirectionReport {
  bool necessary_ok = true;
  std::vector<std::size_t> violating_inputs;   // i in P_o with g-_i = 0
  std::vector<std::size_t> violating_outputs;  // r in Q_o with g+_r = 0
  bool welldef_grs_ok = true;  // max_r y_ro / g+_r <= 1
  bool welldef_vrs_ok = true;  // max_r (y_ro - min_J y_rj) / g+_r <= 1
  bool guaranteed_feasible = false;  // every component strictly positive

  /// Well-defined under the context's RTS: the GRS condition, or the VRS
  /// condition when sum(lambda) = 1.
  bool well_defined_for(const RtsSpec& rts) const { return welldef_grs_ok || (rts.is_vrs() && welldef_vrs_ok); }

  /// Human-readable reason for a failed necessary check, tagged with its source.
  std::string necessary_diagnostic() const;
};

DirectionReport validate_direction(const EvaluationContext& ctx, const DirectionVector& g);

/// Throws DirectionError when the direction's dimensions do not match.
void check_dimensions(const EvaluationContext& ctx, const DirectionVector& g);

}  // namespace dea
