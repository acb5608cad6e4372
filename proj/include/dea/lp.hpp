#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dea::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default tolerances shared by the solver and the model layer.
inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kValueTol = 1e-7;

using VarId = std::size_t;

struct Term {
  VarId var;
  double coef;
};

/// Sparse linear expression sum(coef * var) + constant. Repeated variables
/// are summed.
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpr& add(VarId v, double c) {
    terms.push_back({v, c});
    return *this;
  }
  double evaluate(const std::vector<double>& values) const;
};

enum class Relation { less_equal, greater_equal, equal };

struct Variable {
  std::string name;
  double lower = 0.0;  // may be -kInf
  double upper = kInf;
};

struct Constraint {
  LinearExpr expr;  // constant term is moved to the right-hand side
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
  std::string name;
};

/// Minimization problem over bounded variables.
class LinearProgram {
 public:
  VarId add_variable(std::string name, double lower = 0.0, double upper = kInf);
  void set_objective(LinearExpr objective) { objective_ = std::move(objective); }
  void add_constraint(LinearExpr expr, Relation rel, double rhs, std::string name = {});

  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const LinearExpr& objective() const noexcept { return objective_; }

  /// Largest violation of any constraint or bound at `values`.
  double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;      // meaningful when optimal
  std::vector<double> values;  // one optimal assignment, when optimal
  std::size_t iterations = 0;
};

struct SolverOptions {
  double feasibility_tol = kFeasibilityTol;
  double pivot_tol = 1e-11;
  /// Coefficients, bounds or right-hand sides larger than this in magnitude
  /// are refused.
  double coefficient_cap = 1e12;
};

/// Input rejected as numerically pathological.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic; the
/// infeasible/unbounded verdicts come from the phase-one optimum and the
/// unbounded-ray test, never from an iteration cap.
LpOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/// CPLEX LP-format text, for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);

}  // namespace dea::lp
