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

#include "norobi/reformulate.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"

namespace norobi {

bool Subproblem::ground() const {
  auto covered = [&](const LinearExpr& expr) {
    for (const auto& [name, coeff] : expr.terms()) {
      if (find_variable(name) == nullptr) return false;
    }
    return true;
  };
  if (!covered(objective)) return false;
  for (const auto& c : constraints) {
    if (!covered(c.expr)) return false;
  }
  return true;
}

const Variable* Subproblem::find_variable(const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

Subproblem bind(const Subproblem& problem, const Assignment& fragment) {
  Subproblem bound = problem;
  bound.objective = problem.objective.substitute(fragment);
  for (auto& c : bound.constraints) c.expr = c.expr.substitute(fragment);
  bound.frozen.merge(fragment);
  return bound;
}

std::pair<Rational, Rational> objective_range(
    const LinearExpr& expr, const MultilevelInstance& instance) {
  Rational lo = expr.constant();
  Rational hi = expr.constant();
  for (const auto& [name, coeff] : expr.terms()) {
    const Variable& v = instance.variable(name);
    if (!v.lower || !v.upper) {
      throw InputError("variable " + name + " is unbounded");
    }
    if (coeff > 0) {
      lo += coeff * *v.lower;
      hi += coeff * *v.upper;
    } else {
      lo += coeff * *v.upper;
      hi += coeff * *v.lower;
    }
  }
  return {lo, hi};
}

namespace {

std::string unique_name(std::string base,
                        const std::vector<Variable>& variables) {
  auto taken = [&](const std::string& name) {
    return std::any_of(variables.begin(), variables.end(),
                       [&](const Variable& v) { return v.name == name; });
  };
  while (taken(base)) base += "_";
  return base;
}

std::string unique_constraint_name(std::string base,
                                   const std::vector<Constraint>& constraints) {
  auto taken = [&](const std::string& name) {
    return std::any_of(constraints.begin(), constraints.end(),
                       [&](const Constraint& c) { return c.name == name; });
  };
  while (taken(base)) base += "_";
  return base;
}

bool integral_expr_over_integers(const LinearExpr& expr,
                                 const MultilevelInstance& instance) {
  if (!is_integral(expr.constant())) return false;
  for (const auto& [name, coeff] : expr.terms()) {
    if (!is_integral(coeff)) return false;
    if (instance.variable(name).kind != VarKind::Integer) return false;
  }
  return true;
}

void require_nos(const MultilevelInstance& instance, const char* what) {
  if (!instance.nos.has_value()) {
    throw InputError(std::string(what) +
                     " requires a near-optimality specification");
  }
}

}  // namespace

Subproblem epigraph_form(const LevelProblem& level,
                         const MultilevelInstance& instance) {
  Subproblem sub;
  for (const Variable* v : instance.variables_at(level.index)) {
    sub.variables.push_back(*v);
  }
  const auto [lo, hi] = objective_range(level.objective, instance);
  Variable u;
  u.name = unique_name("u", sub.variables);
  u.level = level.index;
  // An integral objective over integer variables keeps the epigraph variable
  // integer, so the subproblem never mixes kinds.
  u.kind = integral_expr_over_integers(level.objective, instance)
               ? VarKind::Integer
               : VarKind::Continuous;
  u.lower = lo;
  u.upper = hi;

  LinearExpr epi = level.objective;
  epi.add_term(u.name, Rational(-1));
  sub.constraints.push_back(
      {unique_constraint_name("epigraph", level.constraints), std::move(epi)});
  for (const auto& c : level.constraints) sub.constraints.push_back(c);
  sub.objective = LinearExpr::term(u.name, Rational(1));
  sub.variables.push_back(std::move(u));
  return sub;
}

LinearExpr near_optimality_cut(const MultilevelInstance& instance,
                               const Assignment& x, const Rational& fstar,
                               const Rational& delta) {
  require_nos(instance, "near_optimality_cut");
  if (delta < 0) throw InputError("delta must be nonnegative");
  const int d = instance.nos->deviating_level;
  const LevelProblem& deviating = instance.levels.at(d);
  LinearExpr cut =
      deviating.objective.substitute(restrict_assignment(instance, x, 0, d - 1));
  cut.add_constant(-fstar - delta);
  return cut;
}

bool constraint_sensitive(const MultilevelInstance& instance, int level,
                          std::size_t k) {
  require_nos(instance, "constraint_sensitive");
  const int d = instance.nos->deviating_level;
  const Constraint& c = instance.levels.at(level).constraints.at(k);
  for (const auto& [name, coeff] : c.expr.terms()) {
    if (instance.variable(name).level >= d) return true;
  }
  return false;
}

Subproblem build_adversarial(const MultilevelInstance& instance,
                             int protected_level, std::size_t k,
                             const Assignment& x, const Rational& fstar) {
  require_nos(instance, "build_adversarial");
  const int d = instance.nos->deviating_level;
  if (d != instance.bottom_level()) {
    throw InputError(
        "flat adversarial subproblems require the deviating level to be the "
        "bottom level; worst cases over deeper tails are executed by the "
        "oracle layer");
  }
  const Constraint& target =
      instance.levels.at(protected_level).constraints.at(k);
  if (!constraint_sensitive(instance, protected_level, k)) {
    throw InsensitiveConstraint("constraint " + target.name + " of level " +
                                std::to_string(protected_level) +
                                " references no deviating-or-lower variable");
  }

  const Assignment upper = restrict_assignment(instance, x, 0, d - 1);
  Subproblem sub;
  for (const Variable* v : instance.variables_at_or_below(d)) {
    sub.variables.push_back(*v);
  }
  sub.objective = target.expr.substitute(upper).negated();
  for (int j = d; j <= instance.bottom_level(); ++j) {
    for (const auto& c : instance.levels[j].constraints) {
      sub.constraints.push_back({c.name, c.expr.substitute(upper)});
    }
  }
  LinearExpr cut =
      near_optimality_cut(instance, upper, fstar, instance.nos->delta);
  sub.constraints.push_back(
      {unique_constraint_name("near_optimality_cut", sub.constraints),
       std::move(cut)});
  sub.frozen = upper;
  if (!sub.ground()) {
    throw InputError(
        "adversarial subproblem is not ground: the fragment must fix every "
        "upper-level variable the expressions reference");
  }
  return sub;
}

std::size_t AdversarySet::sensitive_count() const {
  std::size_t count = 0;
  for (const auto& e : entries) {
    if (e.problem.has_value()) ++count;
  }
  return count;
}

AdversarySet build_gnormp_adversaries(const MultilevelInstance& instance,
                                      const Assignment& x_prefix,
                                      const Rational& fstar) {
  require_nos(instance, "build_gnormp_adversaries");
  AdversarySet set;
  for (int p : instance.nos->protected_levels) {
    const auto& constraints = instance.levels.at(p).constraints;
    for (std::size_t k = 0; k < constraints.size(); ++k) {
      AdversaryEntry entry;
      entry.level = p;
      entry.constraint_index = k;
      entry.constraint_name = constraints[k].name;
      if (constraint_sensitive(instance, p, k)) {
        entry.problem = build_adversarial(instance, p, k, x_prefix, fstar);
      }
      set.entries.push_back(std::move(entry));
    }
  }
  return set;
}

MultilevelInstance build_alt(const MultilevelInstance& instance) {
  require_nos(instance, "build_alt");
  if (instance.levels.size() != 2) {
    throw InputError("the objective-protected variant is defined for bilevel "
                     "instances");
  }
  MultilevelInstance alt = instance;
  const LinearExpr original_objective = alt.levels[0].objective;
  const auto [lo, hi] = objective_range(original_objective, instance);

  Variable tau;
  tau.name = unique_name("tau", alt.variables);
  tau.level = 0;
  tau.kind = VarKind::Continuous;
  tau.lower = lo;
  tau.upper = hi;

  LinearExpr bound_expr = original_objective;
  bound_expr.add_term(tau.name, Rational(-1));
  alt.levels[0].constraints.push_back(
      {unique_constraint_name("objective_bound", alt.levels[0].constraints),
       std::move(bound_expr)});
  alt.levels[0].objective = LinearExpr::term(tau.name, Rational(1));
  alt.variables.push_back(std::move(tau));
  // The objective protection is now an ordinary protected constraint.
  alt.nos->mode = ProtectionMode::ConstraintsOnly;
  return alt;
}

MultilevelInstance build_pessimistic(const MultilevelInstance& instance) {
  require_nos(instance, "build_pessimistic");
  MultilevelInstance pessimistic = instance;
  pessimistic.nos->delta = Rational(0);
  return pessimistic;
}

std::string serialize_subproblem(const Subproblem& problem) {
  MultilevelInstance flat;
  LevelProblem level;
  level.index = 0;
  level.objective = problem.objective;
  level.constraints = problem.constraints;
  flat.levels.push_back(std::move(level));
  for (Variable v : problem.variables) {
    v.level = 0;
    flat.variables.push_back(std::move(v));
  }
  for (const auto& [name, value] : problem.frozen.values) {
    Variable v;
    v.name = name;
    v.level = 0;
    v.kind = is_integral(value) ? VarKind::Integer : VarKind::Continuous;
    v.lower = value;
    v.upper = value;
    flat.variables.push_back(std::move(v));
  }
  return serialize_instance(flat);
}

}  // namespace norobi
