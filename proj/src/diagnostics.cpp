#include "dea/diagnostics.hpp"

namespace dea {

SlackIndexSets slack_index_sets(const EvaluationContext& ctx) {
  const auto& d = ctx.dataset();
  const std::size_t o = ctx.unit();
  const auto& J = ctx.reference_set();
  SlackIndexSets out;

  for (std::size_t i = 0; i < d.num_inputs(); ++i) {
    if (d.input(i, o) != 0.0) continue;
    bool all_positive = true;
    for (std::size_t j : J) all_positive = all_positive && d.input(i, j) > 0.0;
    if (all_positive) out.p.push_back(i);
  }
  for (std::size_t r = 0; r < d.num_outputs(); ++r) {
    if (!(d.output(r, o) > 0.0)) continue;
    double sum = 0.0;
    for (std::size_t j : J) sum += d.output(r, j);
    if (sum == 0.0) out.q.push_back(r);
  }
  return out;
}

std::string format_index_set(const std::vector<std::size_t>& idx, char prefix) {
  std::string s = "{";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ", ";
    s += prefix;
    s += std::to_string(idx[k] + 1);
  }
  return s + "}";
}

}  // namespace dea
