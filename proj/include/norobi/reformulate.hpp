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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "norobi/model.hpp"

namespace norobi {

/// A flat single-level program produced by the reformulation engine.
/// Free variables are bounded; frozen records the parameterizing values that
/// were substituted into the expressions. A subproblem is "ground" when its
/// expressions reference free variables only; epigraph_form may leave upper
/// parameters symbolic until bound.
struct Subproblem {
  std::vector<Variable> variables;
  LinearExpr objective;  // minimized
  std::vector<Constraint> constraints;
  Assignment frozen;

  bool ground() const;
  const Variable* find_variable(const std::string& name) const;
};

/// Substitutes the fragment into every expression and records it as frozen.
Subproblem bind(const Subproblem& problem, const Assignment& fragment);

/// Interval range of expr over the instance's variable box. Requires every
/// referenced variable bounded.
std::pair<Rational, Rational> objective_range(
    const LinearExpr& expr, const MultilevelInstance& instance);

/// Rewrites a level as min u subject to objective - u <= 0 plus the level's
/// own constraints. The auxiliary u stays integer when the level's variables
/// and objective data are integral, so the result never mixes kinds.
Subproblem epigraph_form(const LevelProblem& level,
                         const MultilevelInstance& instance);

/// The near-optimality constraint f(x,.) - fstar - delta <= 0 with x folded
/// in. A point satisfies it iff it deviates from fstar by at most delta.
LinearExpr near_optimality_cut(const MultilevelInstance& instance,
                               const Assignment& x, const Rational& fstar,
                               const Rational& delta);

/// True iff constraint k of the given level references a variable at or
/// below the deviating level (only such constraints can be violated by a
/// deviation).
bool constraint_sensitive(const MultilevelInstance& instance, int level,
                          std::size_t k);

/// Adversarial subproblem for constraint k of the protected level: maximize
/// the constraint's left-hand side over the near-optimal set, expressed as
/// minimizing its negation. Requires the deviating level to be the bottom
/// level (worst cases over deeper tails are executed by the oracle layer).
/// Throws InsensitiveConstraint when the constraint ignores all
/// deviating-or-lower variables.
Subproblem build_adversarial(const MultilevelInstance& instance,
                             int protected_level, std::size_t k,
                             const Assignment& x, const Rational& fstar);

struct AdversaryEntry {
  int level = 0;
  std::size_t constraint_index = 0;
  std::string constraint_name;
  std::optional<Subproblem> problem;  // nullopt: insensitive, no adversary
};

/// One entry per constraint of each protected level, in level order.
struct AdversarySet {
  std::vector<AdversaryEntry> entries;
  std::size_t sensitive_count() const;
};

/// Per-level adversaries for the generalized multilevel variant: every
/// protected level checks its own constraints against the bottom level's
/// near-optimal deviations. x_prefix must fix all decisions above the
/// deviating level; fstar is the bottom optimum under x_prefix.
AdversarySet build_gnormp_adversaries(const MultilevelInstance& instance,
                                      const Assignment& x_prefix,
                                      const Rational& fstar);

/// Conservative variant protecting the top objective: adds a continuous
/// epigraph variable tau (bounded by the objective's interval range),
/// replaces the top objective by tau and appends the protected constraint
/// F - tau <= 0. The returned instance carries mode ConstraintsOnly since
/// the objective protection is now an ordinary constraint.
MultilevelInstance build_alt(const MultilevelInstance& instance);

/// The pessimistic specialization: same instance with delta = 0.
MultilevelInstance build_pessimistic(const MultilevelInstance& instance);

/// Serializes a ground subproblem in the single-level instance format.
/// Frozen variables are emitted pinned (lower bound = upper bound = value)
/// so the document re-parses as a self-contained instance.
std::string serialize_subproblem(const Subproblem& problem);

}  // namespace norobi
