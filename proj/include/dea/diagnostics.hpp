#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dea/dataset.hpp"

namespace dea {

/// Zero-pattern index sets that govern feasibility, computed without an LP.
///   P_o: inputs with x_io = 0 while every reference unit has x_ij > 0.
///   Q_o: outputs with y_ro > 0 while the reference units sum to zero.
struct SlackIndexSets {
  std::vector<std::size_t> p;
  std::vector<std::size_t> q;

  bool empty() const noexcept { return p.empty() && q.empty(); }
  bool operator==(const SlackIndexSets&) const = default;
};

SlackIndexSets slack_index_sets(const EvaluationContext& ctx);

/// "{O1, O2}" style rendering using the 1-based labels I<k>/O<k>.
std::string format_index_set(const std::vector<std::size_t>& idx, char prefix);

}  // namespace dea
