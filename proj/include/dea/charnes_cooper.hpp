#pragma once

#include <stdexcept>
#include <vector>

#include "dea/lp.hpp"

namespace dea::lp {

/// Minimize numerator / denominator over the variables and constraints of
/// `feasible_set` (its objective is ignored). The denominator must be
/// positive on the part of the feasible set of interest.
struct FractionalProgram {
  LinearProgram feasible_set;
  LinearExpr numerator;
  LinearExpr denominator;

  double ratio(const std::vector<double>& values) const {
    return numerator.evaluate(values) / denominator.evaluate(values);
  }
};

/// The optimum has a vanishing scale variable, so the fractional optimum is
/// not attained at a point with positive denominator.
class DenominatorDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LP equivalent of a FractionalProgram. Variables 0..n-1 are the scaled
/// copies of the original variables (same order); `scale` is the extra
/// variable t with denominator(t) = 1.
struct LinearizedProgram {
  LinearProgram lp;
  VarId scale = 0;
  double scale_tol = 1e-12;

  /// Divides the scaled variables by t. Throws DenominatorDegeneracy when
  /// t <= scale_tol.
  std::vector<double> recover(const std::vector<double>& lp_values) const;
};

LinearizedProgram charnes_cooper_linearize(const FractionalProgram& fp);

}  // namespace dea::lp
