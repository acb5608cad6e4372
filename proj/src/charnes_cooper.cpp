#include "dea/charnes_cooper.hpp"

#include <cmath>

namespace dea::lp {

LinearizedProgram charnes_cooper_linearize(const FractionalProgram& fp) {
  const auto& src = fp.feasible_set;
  LinearizedProgram out;
  LinearProgram& lp = out.lp;

  // Scaled copies z_k = t * v_k. Zero bounds carry over directly; other
  // finite bounds become homogeneous rows in (z, t).
  for (const auto& v : src.variables()) {
    const double lo = v.lower == 0.0 ? 0.0 : -kInf;
    const double hi = v.upper == 0.0 ? 0.0 : kInf;
    lp.add_variable("cc_" + v.name, lo, hi);
  }
  out.scale = lp.add_variable("cc_t", 0.0, kInf);
  const VarId t = out.scale;

  for (std::size_t k = 0; k < src.num_variables(); ++k) {
    const auto& v = src.variables()[k];
    if (std::isfinite(v.lower) && v.lower != 0.0) {
      LinearExpr e;
      e.add(k, 1.0).add(t, -v.lower);
      lp.add_constraint(std::move(e), Relation::greater_equal, 0.0, "lb_" + v.name);
    }
    if (std::isfinite(v.upper) && v.upper != 0.0) {
      LinearExpr e;
      e.add(k, 1.0).add(t, -v.upper);
      lp.add_constraint(std::move(e), Relation::less_equal, 0.0, "ub_" + v.name);
    }
  }

  for (const auto& c : src.constraints()) {
    LinearExpr e;
    e.terms = c.expr.terms;
    const double tcoef = c.expr.constant - c.rhs;
    if (tcoef != 0.0) e.add(t, tcoef);
    lp.add_constraint(std::move(e), c.relation, 0.0, c.name);
  }

  LinearExpr norm;
  norm.terms = fp.denominator.terms;
  if (fp.denominator.constant != 0.0) norm.add(t, fp.denominator.constant);
  lp.add_constraint(std::move(norm), Relation::equal, 1.0, "normalization");

  LinearExpr obj;
  obj.terms = fp.numerator.terms;
  if (fp.numerator.constant != 0.0) obj.add(t, fp.numerator.constant);
  lp.set_objective(std::move(obj));
  return out;
}

std::vector<double> LinearizedProgram::recover(const std::vector<double>& lp_values) const {
  const double tv = lp_values.at(scale);
  if (!(tv > scale_tol)) {
    throw DenominatorDegeneracy("scale variable vanished at the optimum (t = " + std::to_string(tv) + ")");
  }
  std::vector<double> v(scale);
  for (std::size_t k = 0; k < scale; ++k) v[k] = lp_values[k] / tv;
  return v;
}

}  // namespace dea::lp
