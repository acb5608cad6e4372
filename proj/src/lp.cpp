#include "dea/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dea::lp {

double LinearExpr::evaluate(const std::vector<double>& values) const {
  double acc = constant;
  for (const auto& t : terms) acc += t.coef * values.at(t.var);
  return acc;
}

VarId LinearProgram::add_variable(std::string name, double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower == kInf || upper == -kInf) {
    throw std::invalid_argument("variable '" + name + "': invalid bounds");
  }
  variables_.push_back({std::move(name), lower, upper});
  return variables_.size() - 1;
}

void LinearProgram::add_constraint(LinearExpr expr, Relation rel, double rhs, std::string name) {
  for (const auto& t : expr.terms) {
    if (t.var >= variables_.size()) {
      throw std::invalid_argument("constraint '" + name + "' references an undeclared variable");
    }
  }
  constraints_.push_back({std::move(expr), rel, rhs, std::move(name)});
}

double LinearProgram::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    worst = std::max(worst, variables_[k].lower - values[k]);
    worst = std::max(worst, values[k] - variables_[k].upper);
  }
  for (const auto& c : constraints_) {
    const double lhs = c.expr.evaluate(values);
    switch (c.relation) {
      case Relation::less_equal: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::greater_equal: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// How an original variable is expressed through non-negative columns:
// x = offset + sign * col[pos] - (neg ? col[neg] : 0).
struct ColumnMap {
  double offset = 0.0;
  double sign = 1.0;
  std::size_t pos = 0;
  std::ptrdiff_t neg = -1;
};

struct Row {
  std::vector<double> coef;  // over structural columns
  Relation rel;
  double rhs;
};

enum class ColumnKind { structural, slack, artificial };

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double& objective() { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    // Move the last constraint row into r, then shift the cost row up.
    const std::size_t w = cols_ + 1;
    if (r != rows_ - 1) std::copy_n(&data_[(rows_ - 1) * w], w, &data_[r * w]);
    std::copy_n(&data_[rows_ * w], w, &data_[(rows_ - 1) * w]);
    --rows_;
    data_.resize((rows_ + 1) * w);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { optimal, unbounded };

class Simplex {
 public:
  Simplex(Tableau& t, std::vector<std::size_t>& basis, const std::vector<ColumnKind>& kinds, const SolverOptions& opt)
      : t_(t), basis_(basis), kinds_(kinds), opt_(opt) {}

  // A phase with a bounded objective (phase one) never reports unbounded:
  // a column that improves only by rounding noise and has no positive pivot
  // is skipped instead.
  PhaseResult run(bool allow_artificial_entering, double cost_tol, bool bounded_objective, std::size_t& iterations) {
    const std::size_t cap = 100000 + 50 * (t_.rows() + t_.cols());
    while (true) {
      if (++iterations > cap) {
        throw ConditioningError("simplex iteration cap reached; the problem is numerically pathological");
      }
      std::ptrdiff_t enter = -1;
      std::ptrdiff_t leave = -1;
      // Bland: lowest-index improving column.
      for (std::size_t c = 0; c < t_.cols(); ++c) {
        if (!allow_artificial_entering && kinds_[c] == ColumnKind::artificial) continue;
        if (t_.cost(c) >= -cost_tol) continue;
        enter = static_cast<std::ptrdiff_t>(c);
        leave = ratio_test(c);
        if (leave >= 0 || !bounded_objective) break;
        enter = -1;
      }
      if (enter < 0) return PhaseResult::optimal;
      if (leave < 0) return PhaseResult::unbounded;
      const auto ec = static_cast<std::size_t>(enter);
      t_.pivot(static_cast<std::size_t>(leave), ec);
      basis_[static_cast<std::size_t>(leave)] = ec;
    }
  }

 private:
  std::ptrdiff_t ratio_test(std::size_t ec) const {
    std::ptrdiff_t leave = -1;
    double best = 0.0;
    for (std::size_t r = 0; r < t_.rows(); ++r) {
      const double a = t_.at(r, ec);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = std::max(t_.rhs(r), 0.0) / a;
      const double eps = 1e-12 * (1.0 + best);
      if (leave < 0 || ratio < best - eps) {
        best = ratio;
        leave = static_cast<std::ptrdiff_t>(r);
      } else if (ratio <= best + eps && basis_[r] < basis_[static_cast<std::size_t>(leave)]) {
        // Ratio tie: Bland picks the lowest-index basic variable.
        best = std::min(best, ratio);
        leave = static_cast<std::ptrdiff_t>(r);
      }
    }
    return leave;
  }

  Tableau& t_;
  std::vector<std::size_t>& basis_;
  const std::vector<ColumnKind>& kinds_;
  const SolverOptions& opt_;
};

void check_magnitude(double v, double cap, const char* what) {
  if (!std::isfinite(v)) throw ConditioningError(std::string("non-finite ") + what);
  if (std::abs(v) > cap) throw ConditioningError(std::string(what) + " magnitude exceeds the configured cap");
}

// Solves the square system M z = b by Gaussian elimination with partial
// pivoting. Returns false when M is numerically singular.
bool solve_dense(std::vector<std::vector<double>> M, std::vector<double> b, std::vector<double>& z) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(M[r][k]) > std::abs(M[p][k])) p = r;
    }
    if (std::abs(M[p][k]) < 1e-14) return false;
    std::swap(M[p], M[k]);
    std::swap(b[p], b[k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = M[r][k] / M[k][k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) M[r][c] -= f * M[k][c];
      b[r] -= f * b[k];
    }
  }
  z.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t c = k + 1; c < n; ++c) acc -= M[k][c] * z[c];
    z[k] = acc / M[k][k];
  }
  return true;
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options) {
  const auto& vars = lp.variables();
  const double cap = options.coefficient_cap;

  for (const auto& t : lp.objective().terms) check_magnitude(t.coef, cap, "objective coefficient");
  check_magnitude(lp.objective().constant, cap, "objective constant");
  for (const auto& c : lp.constraints()) {
    for (const auto& t : c.expr.terms) check_magnitude(t.coef, cap, "constraint coefficient");
    check_magnitude(c.rhs, cap, "right-hand side");
    check_magnitude(c.expr.constant, cap, "constraint constant");
  }
  for (const auto& v : vars) {
    if (std::isfinite(v.lower)) check_magnitude(v.lower, cap, "variable bound");
    if (std::isfinite(v.upper)) check_magnitude(v.upper, cap, "variable bound");
  }

  LpOutcome out;

  // Map each variable onto non-negative structural columns.
  std::vector<ColumnMap> maps(vars.size());
  std::size_t ns = 0;
  std::vector<Row> rows;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& v = vars[k];
    if (v.lower > v.upper) return out;  // empty box
    auto& cm = maps[k];
    if (std::isfinite(v.lower)) {
      cm.offset = v.lower;
      cm.pos = ns++;
    } else if (std::isfinite(v.upper)) {
      cm.offset = v.upper;
      cm.sign = -1.0;
      cm.pos = ns++;
    } else {
      cm.pos = ns++;
      cm.neg = static_cast<std::ptrdiff_t>(ns++);
    }
  }
  auto expand = [&](const LinearExpr& e, std::vector<double>& coef, double& shift) {
    coef.assign(ns, 0.0);
    shift = e.constant;
    for (const auto& t : e.terms) {
      const auto& cm = maps[t.var];
      shift += t.coef * cm.offset;
      coef[cm.pos] += cm.sign * t.coef;
      if (cm.neg >= 0) coef[static_cast<std::size_t>(cm.neg)] -= t.coef;
    }
  };
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& v = vars[k];
    if (std::isfinite(v.lower) && std::isfinite(v.upper)) {
      Row r{std::vector<double>(ns, 0.0), Relation::less_equal, v.upper - v.lower};
      r.coef[maps[k].pos] = 1.0;
      rows.push_back(std::move(r));
    }
  }
  for (const auto& c : lp.constraints()) {
    Row r{{}, c.relation, 0.0};
    double shift = 0.0;
    expand(c.expr, r.coef, shift);
    r.rhs = c.rhs - shift;
    rows.push_back(std::move(r));
  }
  std::vector<double> cost;
  double cost_shift = 0.0;
  expand(lp.objective(), cost, cost_shift);

  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      for (auto& a : r.coef) a = -a;
      r.rhs = -r.rhs;
      if (r.rel == Relation::less_equal) {
        r.rel = Relation::greater_equal;
      } else if (r.rel == Relation::greater_equal) {
        r.rel = Relation::less_equal;
      }
    }
  }

  // Column layout: structural | slack/surplus | artificial.
  const std::size_t nr = rows.size();
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::equal) ++n_slack;
    if (r.rel != Relation::less_equal) ++n_art;
  }
  const std::size_t nc = ns + n_slack + n_art;
  std::vector<ColumnKind> kinds(nc, ColumnKind::structural);
  for (std::size_t c = ns; c < ns + n_slack; ++c) kinds[c] = ColumnKind::slack;
  for (std::size_t c = ns + n_slack; c < nc; ++c) kinds[c] = ColumnKind::artificial;

  // Original standard-form matrix, kept for the final basis refactorization.
  std::vector<std::vector<double>> A(nr, std::vector<double>(nc, 0.0));
  std::vector<double> b(nr, 0.0);
  Tableau t(nr, nc);
  std::vector<std::size_t> basis(nr);
  {
    std::size_t sc = ns;
    std::size_t ac = ns + n_slack;
    for (std::size_t i = 0; i < nr; ++i) {
      const auto& r = rows[i];
      std::copy(r.coef.begin(), r.coef.end(), A[i].begin());
      b[i] = r.rhs;
      if (r.rel == Relation::less_equal) {
        A[i][sc] = 1.0;
        basis[i] = sc++;
      } else if (r.rel == Relation::greater_equal) {
        A[i][sc++] = -1.0;
        A[i][ac] = 1.0;
        basis[i] = ac++;
      } else {
        A[i][ac] = 1.0;
        basis[i] = ac++;
      }
      for (std::size_t c = 0; c < nc; ++c) t.at(i, c) = A[i][c];
      t.rhs(i) = b[i];
    }
  }
  std::vector<std::size_t> row_origin(nr);
  for (std::size_t i = 0; i < nr; ++i) row_origin[i] = i;

  double rhs_scale = 1.0;
  for (double v : b) rhs_scale = std::max(rhs_scale, std::abs(v));

  Simplex simplex(t, basis, kinds, options);

  // Phase one: minimize the sum of artificials.
  if (n_art > 0) {
    for (std::size_t c = 0; c <= nc; ++c) t.at(nr, c) = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      if (kinds[basis[i]] != ColumnKind::artificial) continue;
      for (std::size_t c = 0; c <= nc; ++c) t.at(nr, c) -= t.at(i, c);
    }
    for (std::size_t i = 0; i < nr; ++i) {
      if (kinds[basis[i]] == ColumnKind::artificial) t.cost(basis[i]) = 0.0;
    }
    simplex.run(true, 1e-12, true, out.iterations);
    const double infeasibility = -t.objective();
    if (infeasibility > options.feasibility_tol * rhs_scale) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    for (std::size_t i = 0; i < t.rows();) {
      if (kinds[basis[i]] != ColumnKind::artificial) {
        ++i;
        continue;
      }
      std::ptrdiff_t pc = -1;
      double best = 1e-9;
      for (std::size_t c = 0; c < nc; ++c) {
        if (kinds[c] == ColumnKind::artificial) continue;
        if (std::abs(t.at(i, c)) > best) {
          best = std::abs(t.at(i, c));
          pc = static_cast<std::ptrdiff_t>(c);
        }
      }
      if (pc >= 0) {
        t.pivot(i, static_cast<std::size_t>(pc));
        basis[i] = static_cast<std::size_t>(pc);
        ++i;
      } else {
        // Redundant row.
        const std::size_t last = t.rows() - 1;
        t.drop_row(i);
        basis[i] = basis[last];
        basis.pop_back();
        row_origin[i] = row_origin[last];
        row_origin.pop_back();
      }
    }
  }

  // Phase two.
  double cost_scale = 0.0;
  for (double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
  for (std::size_t c = 0; c <= nc; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < ns; ++c) t.cost(c) = cost[c];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t bc = basis[i];
    const double cb = bc < ns ? cost[bc] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= nc; ++c) t.at(t.rows(), c) -= cb * t.at(i, c);
  }
  if (simplex.run(false, 1e-11 * std::max(1.0, cost_scale), false, out.iterations) == PhaseResult::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  // Read the basic solution, refined by refactorizing the final basis.
  std::vector<double> col(nc, 0.0);
  {
    const std::size_t k = t.rows();
    std::vector<std::vector<double>> B(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      rhs[i] = b[row_origin[i]];
      for (std::size_t j = 0; j < k; ++j) B[i][j] = A[row_origin[i]][basis[j]];
    }
    std::vector<double> z;
    if (solve_dense(std::move(B), std::move(rhs), z)) {
      for (std::size_t j = 0; j < k; ++j) col[basis[j]] = std::max(z[j], 0.0);
    } else {
      for (std::size_t i = 0; i < k; ++i) col[basis[i]] = std::max(t.rhs(i), 0.0);
    }
  }

  out.values.assign(vars.size(), 0.0);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& cm = maps[k];
    double x = cm.offset + cm.sign * col[cm.pos];
    if (cm.neg >= 0) x -= col[static_cast<std::size_t>(cm.neg)];
    out.values[k] = x;
  }
  out.status = LpStatus::optimal;
  out.objective = lp.objective().evaluate(out.values);
  return out;
}

namespace {

std::string lp_name(const std::string& name, const char* prefix, std::size_t idx) {
  if (name.empty()) return prefix + std::to_string(idx);
  std::string out;
  for (char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    out += ok ? ch : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
  return out;
}

void write_expr(std::ostringstream& os, const LinearExpr& e, const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& t : e.terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? " - " : (first ? " " : " + ")) << std::abs(t.coef) << " " << names[t.var];
    first = false;
  }
  if (first) os << " 0 " << (names.empty() ? "x" : names.front());
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < lp.num_variables(); ++k) names.push_back(lp_name(lp.variables()[k].name, "x", k));

  std::ostringstream os;
  os.precision(17);
  os << "\\ objective constant: " << lp.objective().constant << "\n";
  os << "Minimize\n obj:";
  write_expr(os, lp.objective(), names);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    const auto& c = lp.constraints()[i];
    os << " " << lp_name(c.name, "c", i) << ":";
    write_expr(os, c.expr, names);
    const char* rel = c.relation == Relation::less_equal ? " <= " : c.relation == Relation::greater_equal ? " >= " : " = ";
    os << rel << (c.rhs - c.expr.constant) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t k = 0; k < lp.num_variables(); ++k) {
    const auto& v = lp.variables()[k];
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      os << " " << names[k] << " free\n";
    } else {
      os << " ";
      if (std::isfinite(v.lower)) {
        os << v.lower;
      } else {
        os << "-inf";
      }
      os << " <= " << names[k];
      if (std::isfinite(v.upper)) os << " <= " << v.upper;
      os << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace dea::lp
