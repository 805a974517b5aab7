// Copyright 2026 The norobi authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "norobi/subsolver.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>

#include "norobi/errors.hpp"

namespace norobi {

OptResult OptResult::optimal(Rational value, Assignment witness) {
  OptResult r;
  r.status = SolveStatus::Optimal;
  r.value = std::move(value);
  r.witness = std::move(witness);
  return r;
}

OptResult OptResult::infeasible() {
  OptResult r;
  r.status = SolveStatus::Infeasible;
  return r;
}

OptResult OptResult::unbounded() {
  OptResult r;
  r.status = SolveStatus::Unbounded;
  return r;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "OPTIMAL";
    case SolveStatus::Infeasible:
      return "INFEASIBLE";
    case SolveStatus::Unbounded:
      return "UNBOUNDED";
  }
  return "UNKNOWN";
}

namespace {

void require_ground(const Subproblem& problem, const char* what) {
  if (!problem.ground()) {
    throw InputError(std::string(what) +
                     ": subproblem references variables outside its free set; "
                     "bind the parameterization first");
  }
}

void require_bounds(const Subproblem& problem) {
  for (const auto& v : problem.variables) {
    if (!v.lower || !v.upper) {
      throw InputError("variable " + v.name + " is unbounded");
    }
  }
}

// --- exact primal simplex ------------------------------------------------
//
// Variables are shifted to w = y - lb >= 0 and upper bounds become explicit
// rows, so the tableau is the textbook all-slack form. Phase one drives a
// sum of artificials to zero, phase two optimizes the shifted objective.
// Bland's rule (smallest eligible index, entering and leaving) guarantees
// termination; all pivots are exact.

struct Tableau {
  std::size_t n_struct = 0;
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  std::vector<std::vector<Rational>> rows;  // tableau coefficients
  std::vector<Rational> rhs;                // nonnegative throughout
  std::vector<std::size_t> basis;           // basic column per row

  std::size_t cols() const { return n_struct + n_slack + n_art; }
};

void pivot(Tableau& t, std::size_t row, std::size_t col) {
  const Rational p = t.rows[row][col];
  for (auto& value : t.rows[row]) value /= p;
  t.rhs[row] /= p;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == row) continue;
    const Rational factor = t.rows[i][col];
    if (factor == 0) continue;
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      t.rows[i][j] -= factor * t.rows[row][j];
    }
    t.rhs[i] -= factor * t.rhs[row];
  }
  t.basis[row] = col;
}

enum class PivotOutcome { Optimal, Unbounded };

PivotOutcome run_simplex(Tableau& t, const std::vector<Rational>& cost,
                         std::size_t allowed_cols) {
  while (true) {
    // Reduced costs against the current basis.
    std::vector<Rational> dual(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) dual[i] = cost[t.basis[i]];

    std::size_t entering = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (dual[i] != 0) reduced -= dual[i] * t.rows[i][j];
      }
      if (reduced < 0) {
        entering = j;
        break;  // Bland: smallest index
      }
    }
    if (entering == allowed_cols) return PivotOutcome::Optimal;

    std::size_t leaving = t.rows.size();
    Rational best_ratio;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (t.rows[i][entering] <= 0) continue;
      const Rational ratio = t.rhs[i] / t.rows[i][entering];
      if (leaving == t.rows.size() || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[i] < t.basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == t.rows.size()) return PivotOutcome::Unbounded;
    pivot(t, leaving, entering);
  }
}

}  // namespace

OptResult solve_lp(const Subproblem& problem) {
  require_ground(problem, "solve_lp");
  require_bounds(problem);
  for (const auto& v : problem.variables) {
    if (v.kind != VarKind::Continuous) {
      throw InputError("solve_lp requires continuous variables; " + v.name +
                       " is integer");
    }
  }
  const std::size_t n = problem.variables.size();
  std::vector<std::string> names(n);
  std::vector<Rational> lower(n), width(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = problem.variables[j];
    names[j] = v.name;
    lower[j] = *v.lower;
    width[j] = *v.upper - *v.lower;
    if (width[j] < 0) return OptResult::infeasible();
  }
  auto column_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t j = 0; j < n; ++j) {
      if (names[j] == name) return j;
    }
    throw InternalError("solve_lp: unknown variable " + name);
  };

  // Rows a.w <= b in shifted coordinates.
  std::vector<std::vector<Rational>> raw;
  std::vector<Rational> raw_rhs;
  auto add_row = [&](const LinearExpr& expr) {
    std::vector<Rational> row(n, Rational(0));
    Rational rhs = -expr.constant();
    for (const auto& [name, coeff] : expr.terms()) {
      const std::size_t j = column_of(name);
      row[j] = coeff;
      rhs -= coeff * lower[j];
    }
    raw.push_back(std::move(row));
    raw_rhs.push_back(std::move(rhs));
  };
  for (const auto& c : problem.constraints) add_row(c.expr);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(n, Rational(0));
    row[j] = 1;
    raw.push_back(std::move(row));
    raw_rhs.push_back(width[j]);
  }

  // Objective in shifted coordinates plus a constant offset.
  std::vector<Rational> objective(n, Rational(0));
  Rational offset = problem.objective.constant();
  for (const auto& [name, coeff] : problem.objective.terms()) {
    const std::size_t j = column_of(name);
    objective[j] = coeff;
    offset += coeff * lower[j];
  }

  if (n == 0) {
    for (const auto& rhs : raw_rhs) {
      if (rhs < 0) return OptResult::infeasible();
    }
    return OptResult::optimal(offset, Assignment{});
  }

  const std::size_t m = raw.size();
  Tableau t;
  t.n_struct = n;
  t.n_slack = m;
  std::vector<std::size_t> artificial_of;  // row -> artificial column or npos
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (raw_rhs[i] < 0) ++n_art;
  }
  t.n_art = n_art;
  const std::size_t total = n + m + n_art;
  std::size_t next_art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(total, Rational(0));
    const bool flip = raw_rhs[i] < 0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = flip ? -raw[i][j] : raw[i][j];
    }
    row[n + i] = flip ? Rational(-1) : Rational(1);
    Rational rhs = flip ? -raw_rhs[i] : raw_rhs[i];
    std::size_t basic;
    if (flip) {
      row[next_art] = 1;
      basic = next_art++;
    } else {
      basic = n + i;
    }
    t.rows.push_back(std::move(row));
    t.rhs.push_back(std::move(rhs));
    t.basis.push_back(basic);
  }

  if (n_art > 0) {
    std::vector<Rational> phase1(total, Rational(0));
    for (std::size_t j = n + m; j < total; ++j) phase1[j] = 1;
    if (run_simplex(t, phase1, total) == PivotOutcome::Unbounded) {
      throw InternalError("phase-one simplex reported unbounded");
    }
    Rational infeasibility(0);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (t.basis[i] >= n + m) infeasibility += t.rhs[i];
    }
    if (infeasibility > 0) return OptResult::infeasible();
    // Drive leftover zero-valued artificials out of the basis.
    for (std::size_t i = t.rows.size(); i-- > 0;) {
      if (t.basis[i] < n + m) continue;
      std::size_t col = n + m;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (t.rows[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col < n + m) {
        pivot(t, i, col);
      } else {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
        t.rhs.erase(t.rhs.begin() + static_cast<std::ptrdiff_t>(i));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  std::vector<Rational> phase2(total, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = objective[j];
  // Artificials are barred from re-entering.
  if (run_simplex(t, phase2, n + m) == PivotOutcome::Unbounded) {
    return OptResult::unbounded();
  }

  std::vector<Rational> shifted(n, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < n) shifted[t.basis[i]] = t.rhs[i];
  }
  Assignment witness;
  Rational value = offset;
  for (std::size_t j = 0; j < n; ++j) {
    witness.set(names[j], shifted[j] + lower[j]);
    value += objective[j] * shifted[j];
  }
  return OptResult::optimal(std::move(value), std::move(witness));
}

namespace {

struct CompiledExpr {
  std::vector<std::pair<std::size_t, Rational>> terms;
  Rational constant;
};

CompiledExpr compile_expr(const LinearExpr& expr,
                          const std::vector<std::string>& names) {
  CompiledExpr compiled;
  compiled.constant = expr.constant();
  for (const auto& [name, coeff] : expr.terms()) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw InternalError("enumerate_integer: unknown variable " + name);
    }
    compiled.terms.emplace_back(
        static_cast<std::size_t>(it - names.begin()), coeff);
  }
  return compiled;
}

}  // namespace

OptResult enumerate_integer(const Subproblem& problem,
                            const SolverLimits& limits) {
  require_ground(problem, "enumerate_integer");
  require_bounds(problem);
  for (const auto& v : problem.variables) {
    if (v.kind != VarKind::Integer) {
      throw InputError("enumerate_integer requires integer variables; " +
                       v.name + " is continuous");
    }
  }
  const std::size_t n = problem.variables.size();
  std::vector<std::string> names(n);
  std::vector<Integer> lo(n), hi(n);
  Integer points(1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = problem.variables[j];
    names[j] = v.name;
    lo[j] = ceil_int(*v.lower);
    hi[j] = floor_int(*v.upper);
    if (lo[j] > hi[j]) return OptResult::infeasible();
    points *= hi[j] - lo[j] + 1;
  }
  if (points > limits.enumeration_cap) {
    throw CapError("instance too large for oracle: " + points.str() +
                   " candidate points exceed cap " +
                   std::to_string(limits.enumeration_cap));
  }

  std::vector<CompiledExpr> constraints;
  constraints.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) {
    constraints.push_back(compile_expr(c.expr, names));
  }
  const CompiledExpr objective = compile_expr(problem.objective, names);

  std::vector<Integer> current = lo;
  std::vector<Rational> point(n);
  bool have_best = false;
  Rational best_value;
  std::vector<Integer> best_point;

  // The odometer visits points in lexicographic order (first variable
  // slowest), so keeping the first strict improvement realizes the
  // lexicographically-smallest tie-break.
  while (true) {
    for (std::size_t j = 0; j < n; ++j) point[j] = Rational(current[j]);
    bool feasible = true;
    for (const auto& c : constraints) {
      Rational lhs = c.constant;
      for (const auto& [idx, coeff] : c.terms) lhs += coeff * point[idx];
      if (lhs > 0) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      Rational value = objective.constant;
      for (const auto& [idx, coeff] : objective.terms) {
        value += coeff * point[idx];
      }
      if (!have_best || value < best_value) {
        have_best = true;
        best_value = value;
        best_point = current;
      }
    }
    if (n == 0) break;
    std::size_t j = n;
    bool advanced = false;
    while (j-- > 0) {
      if (current[j] < hi[j]) {
        ++current[j];
        for (std::size_t r = j + 1; r < n; ++r) current[r] = lo[r];
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }

  if (!have_best) return OptResult::infeasible();
  Assignment witness;
  for (std::size_t j = 0; j < n; ++j) {
    witness.set(names[j], Rational(best_point[j]));
  }
  return OptResult::optimal(std::move(best_value), std::move(witness));
}

OptResult solve_subproblem(const Subproblem& problem,
                           const SolverLimits& limits) {
  bool any_int = false, any_cont = false;
  for (const auto& v : problem.variables) {
    (v.kind == VarKind::Integer ? any_int : any_cont) = true;
  }
  if (any_int && any_cont) {
    throw InputError("mixed free variables unsupported");
  }
  if (any_cont) return solve_lp(problem);
  return enumerate_integer(problem, limits);
}

namespace {

struct TailContext {
  const MultilevelInstance& instance;
  std::vector<std::string> order;  // tail variables in declaration order

  bool lex_less(const Assignment& a, const Assignment& b) const {
    for (const auto& name : order) {
      const Rational& va = a.at(name);
      const Rational& vb = b.at(name);
      if (va != vb) return va < vb;
    }
    return false;
  }
};

// Integer grid over one level's variables, visited in lexicographic order.
// With skip_continuous the level's continuous variables are left out (the
// caller optimizes them separately); otherwise they are an error.
class LevelGrid {
 public:
  LevelGrid(const MultilevelInstance& instance, int level,
            bool skip_continuous = false) {
    for (const Variable* v : instance.variables_at(level)) {
      if (v->kind != VarKind::Integer) {
        if (skip_continuous) continue;
        throw InputError("variable " + v->name +
                         " is continuous; exhaustive search requires integer "
                         "variables");
      }
      if (!v->lower || !v->upper) {
        throw InputError("variable " + v->name + " is unbounded");
      }
      names_.push_back(v->name);
      lo_.push_back(ceil_int(*v->lower));
      hi_.push_back(floor_int(*v->upper));
    }
  }

  Integer size() const {
    Integer total(1);
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (lo_[j] > hi_[j]) return Integer(0);
      total *= hi_[j] - lo_[j] + 1;
    }
    return total;
  }

  /// Calls fn for every point, in lexicographic order.
  void for_each(const std::function<void(const Assignment&)>& fn) const {
    if (size() == 0) return;
    const std::size_t n = names_.size();
    std::vector<Integer> current = lo_;
    while (true) {
      Assignment point;
      for (std::size_t j = 0; j < n; ++j) {
        point.set(names_[j], Rational(current[j]));
      }
      fn(point);
      if (n == 0) return;
      std::size_t j = n;
      bool advanced = false;
      while (j-- > 0) {
        if (current[j] < hi_[j]) {
          ++current[j];
          for (std::size_t r = j + 1; r < n; ++r) current[r] = lo_[r];
          advanced = true;
          break;
        }
      }
      if (!advanced) return;
    }
  }

 private:
  std::vector<std::string> names_;
  std::vector<Integer> lo_, hi_;
};

bool level_constraints_hold(const MultilevelInstance& instance, int level,
                            const Assignment& point) {
  for (const auto& c : instance.levels[level].constraints) {
    if (evaluate(c.expr, point) > 0) return false;
  }
  return true;
}

std::vector<Assignment> tail_optima_rec(const MultilevelInstance& instance,
                                        const Assignment& fixed, int level) {
  const int bottom = instance.bottom_level();
  const LevelGrid grid(instance, level);
  bool have_best = false;
  Rational best_value;
  std::vector<Assignment> best;

  grid.for_each([&](const Assignment& point) {
    Assignment acc = fixed;
    acc.merge(point);
    std::vector<Assignment> subs;
    if (level == bottom) {
      subs.push_back(Assignment{});
    } else {
      subs = tail_optima_rec(instance, acc, level + 1);
      if (subs.empty()) return;
    }
    for (const auto& t : subs) {
      Assignment full = acc;
      full.merge(t);
      if (!level_constraints_hold(instance, level, full)) continue;
      const Rational value = evaluate(instance.levels[level].objective, full);
      Assignment tail = point;
      tail.merge(t);
      if (!have_best || value < best_value) {
        have_best = true;
        best_value = value;
        best.clear();
        best.push_back(std::move(tail));
      } else if (value == best_value) {
        best.push_back(std::move(tail));
      }
    }
  });
  return best;
}

void check_tail_cap(const MultilevelInstance& instance, int from_level,
                    const SolverLimits& limits) {
  Integer total(1);
  for (int level = from_level; level <= instance.bottom_level(); ++level) {
    total *= LevelGrid(instance, level).size();
  }
  if (total > limits.enumeration_cap) {
    throw CapError("instance too large for oracle: tail grid of " +
                   total.str() + " points exceeds cap " +
                   std::to_string(limits.enumeration_cap));
  }
}

}  // namespace

std::vector<Assignment> hierarchical_optima(const MultilevelInstance& instance,
                                            const Assignment& fixed,
                                            int from_level,
                                            const SolverLimits& limits) {
  if (from_level < 0 || from_level > instance.bottom_level()) {
    throw InputError("hierarchical_optima: level out of range");
  }
  check_tail_cap(instance, from_level, limits);
  std::vector<Assignment> optima = tail_optima_rec(instance, fixed, from_level);

  TailContext ctx{instance, {}};
  for (const auto& v : instance.variables) {
    if (v.level >= from_level) ctx.order.push_back(v.name);
  }
  std::sort(optima.begin(), optima.end(),
            [&](const Assignment& a, const Assignment& b) {
              return ctx.lex_less(a, b);
            });
  optima.erase(std::unique(optima.begin(), optima.end()), optima.end());
  return optima;
}

OptResult solve_hierarchical(const MultilevelInstance& instance,
                             const Assignment& fixed, int from_level,
                             const SolverLimits& limits) {
  if (from_level < 0 || from_level > instance.bottom_level()) {
    throw InputError("solve_hierarchical: level out of range");
  }
  const auto tail_vars = instance.variables_at_or_below(from_level);
  const bool all_integer =
      std::all_of(tail_vars.begin(), tail_vars.end(), [](const Variable* v) {
        return v->kind == VarKind::Integer;
      });
  if (!all_integer) {
    if (from_level != instance.bottom_level()) {
      throw InputError(
          "continuous tails are supported only when the tail is a single "
          "level");
    }
    Subproblem sub;
    for (const Variable* v : tail_vars) sub.variables.push_back(*v);
    sub.objective = instance.levels[from_level].objective.substitute(fixed);
    for (const auto& c : instance.levels[from_level].constraints) {
      sub.constraints.push_back({c.name, c.expr.substitute(fixed)});
    }
    sub.frozen = fixed;
    return solve_subproblem(sub, limits);
  }

  const auto optima = hierarchical_optima(instance, fixed, from_level, limits);
  if (optima.empty()) return OptResult::infeasible();
  Assignment full = fixed;
  full.merge(optima.front());
  const Rational value =
      evaluate(instance.levels[from_level].objective, full);
  return OptResult::optimal(value, optima.front());
}

WorstCase worst_case(const MultilevelInstance& instance, int protected_level,
                     std::size_t k, const Assignment& upper,
                     const Rational& fstar,
                     const std::set<std::string>& symbolic,
                     const SolverLimits& limits) {
  if (!instance.nos.has_value()) {
    throw InputError("worst_case requires a near-optimality specification");
  }
  const int d = instance.nos->deviating_level;
  const int bottom = instance.bottom_level();
  const Constraint& target =
      instance.levels.at(protected_level).constraints.at(k);

  const Assignment up = restrict_assignment(instance, upper, 0, d - 1);
  LinearExpr g = target.expr.substitute(up);
  // Terms on symbolic variables stay with the caller.
  LinearExpr g_z(g.constant());
  bool sensitive = false;
  for (const auto& [name, coeff] : g.terms()) {
    if (symbolic.count(name) != 0) continue;
    const Variable& v = instance.variable(name);
    if (v.level < d) {
      throw InputError("worst_case: missing value for upper variable " + name);
    }
    sensitive = true;
    g_z.add_term(name, coeff);
  }
  if (!sensitive) return WorstCase{};  // Insensitive

  WorstCase result;
  if (d == bottom) {
    Subproblem sub;
    for (const Variable* v : instance.variables_at_or_below(d)) {
      sub.variables.push_back(*v);
    }
    sub.objective = g_z.negated();
    for (const auto& c : instance.levels[d].constraints) {
      sub.constraints.push_back({c.name, c.expr.substitute(up)});
    }
    sub.constraints.push_back(
        {"near_optimality_cut",
         near_optimality_cut(instance, up, fstar, instance.nos->delta)});
    sub.frozen = up;
    const OptResult res = solve_subproblem(sub, limits);
    if (res.status == SolveStatus::Unbounded) {
      throw InternalError("adversarial subproblem reported unbounded");
    }
    if (res.status == SolveStatus::Infeasible) {
      result.kind = WorstCase::Kind::EmptySet;
      return result;
    }
    result.kind = WorstCase::Kind::Solved;
    result.value = -*res.value;
    result.witness = *res.witness;
    return result;
  }

  // Deviating level above the bottom: scan its deviations; layers below
  // respond optimistically and the response is part of the worst case.
  const LevelGrid grid(instance, d);
  if (grid.size() > limits.enumeration_cap) {
    throw CapError("instance too large for oracle: deviation grid of " +
                   grid.size().str() + " points exceeds cap " +
                   std::to_string(limits.enumeration_cap));
  }
  const Rational budget = fstar + instance.nos->delta;
  bool found = false;
  Rational best;
  Assignment best_witness;
  grid.for_each([&](const Assignment& deviation) {
    Assignment fixed2 = up;
    fixed2.merge(deviation);
    const OptResult tail =
        solve_hierarchical(instance, fixed2, d + 1, limits);
    if (!tail.is_optimal()) return;
    Assignment joint = fixed2;
    joint.merge(*tail.witness);
    if (!level_constraints_hold(instance, d, joint)) return;
    if (evaluate(instance.levels[d].objective, joint) > budget) return;
    const Rational value = evaluate(g_z, joint);
    if (!found || value > best) {
      found = true;
      best = value;
      best_witness = deviation;
      best_witness.merge(*tail.witness);
    }
  });
  if (!found) {
    result.kind = WorstCase::Kind::EmptySet;
    return result;
  }
  result.kind = WorstCase::Kind::Solved;
  result.value = best;
  result.witness = best_witness;
  return result;
}

std::vector<Assignment> level_grid_points(const MultilevelInstance& instance,
                                          int level,
                                          const SolverLimits& limits) {
  const LevelGrid grid(instance, level, /*skip_continuous=*/true);
  if (grid.size() > limits.enumeration_cap) {
    throw CapError("instance too large for oracle: level " +
                   std::to_string(level) + " grid of " + grid.size().str() +
                   " points exceeds cap " +
                   std::to_string(limits.enumeration_cap));
  }
  std::vector<Assignment> points;
  grid.for_each([&](const Assignment& point) { points.push_back(point); });
  return points;
}

Integer joint_grid_size(const MultilevelInstance& instance, int from_level) {
  Integer total(1);
  for (int level = from_level; level <= instance.bottom_level(); ++level) {
    total *= LevelGrid(instance, level).size();
  }
  return total;
}

Matrix constraint_matrix(const MultilevelInstance& instance, int level) {
  const auto vars = instance.variables_at(level);
  const auto& constraints = instance.levels.at(level).constraints;
  Matrix m(constraints.size(), vars.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (std::size_t j = 0; j < vars.size(); ++j) {
      auto it = constraints[i].expr.terms().find(vars[j]->name);
      if (it != constraints[i].expr.terms().end()) m.at(i, j) = it->second;
    }
  }
  return m;
}

std::vector<Rational> coefficient_row(const MultilevelInstance& instance,
                                      int level, const LinearExpr& expr) {
  const auto vars = instance.variables_at(level);
  std::vector<Rational> row(vars.size(), Rational(0));
  for (std::size_t j = 0; j < vars.size(); ++j) {
    auto it = expr.terms().find(vars[j]->name);
    if (it != expr.terms().end()) row[j] = it->second;
  }
  return row;
}

Matrix append_row(const Matrix& m, const std::vector<Rational>& row) {
  if (row.size() != m.cols) {
    throw InputError("append_row: width mismatch");
  }
  Matrix out(m.rows + 1, m.cols);
  out.data = m.data;
  out.data.insert(out.data.end(), row.begin(), row.end());
  return out;
}

namespace {

// Fraction-free determinant (Bareiss) over exact integers.
Integer determinant_int(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Integer(1);
  Integer prev(1);
  int sign = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (m[i][i] == 0) {
      std::size_t swap_row = n;
      for (std::size_t r = i + 1; r < n; ++r) {
        if (m[r][i] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row == n) return Integer(0);
      std::swap(m[i], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < n; ++r) {
      for (std::size_t c = i + 1; c < n; ++c) {
        m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
      }
      m[r][i] = 0;
    }
    prev = m[i][i];
  }
  return sign > 0 ? m[n - 1][n - 1] : Integer(-m[n - 1][n - 1]);
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t limit) {
  const std::size_t k = combo.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (combo[i] < limit - k + i) {  // position i tops out at limit-k+i
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_totally_unimodular(const Matrix& m, const SolverLimits& limits) {
  if (m.rows * m.cols > limits.tu_cap) {
    throw CapError("matrix of " + std::to_string(m.rows) + "x" +
                   std::to_string(m.cols) + " exceeds the check cap");
  }
  std::vector<std::vector<Integer>> entries(m.rows,
                                            std::vector<Integer>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      const Rational& value = m.at(i, j);
      if (value != -1 && value != 0 && value != 1) return false;
      entries[i][j] = numerator(value);
    }
  }
  const std::size_t kmax = std::min(m.rows, m.cols);
  for (std::size_t k = 2; k <= kmax; ++k) {
    std::vector<std::size_t> row_combo(k);
    std::iota(row_combo.begin(), row_combo.end(), 0);
    do {
      std::vector<std::size_t> col_combo(k);
      std::iota(col_combo.begin(), col_combo.end(), 0);
      do {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            sub[i][j] = entries[row_combo[i]][col_combo[j]];
          }
        }
        const Integer det = determinant_int(std::move(sub));
        if (det > 1 || det < -1) return false;
      } while (next_combination(col_combo, m.cols));
    } while (next_combination(row_combo, m.rows));
  }
  return true;
}

}  // namespace norobi
