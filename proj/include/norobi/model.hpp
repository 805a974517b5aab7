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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "norobi/rational.hpp"

namespace norobi {

enum class VarKind { Integer, Continuous };

/// A decision variable owned by exactly one level. Bounds are optional only
/// so that programmatically built instances can be diagnosed by validate();
/// every solver requires both bounds present.
struct Variable {
  std::string name;
  int level = 0;
  VarKind kind = VarKind::Integer;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

bool operator==(const Variable& a, const Variable& b);

/// Exact values for a set of variables, keyed by name.
struct Assignment {
  std::map<std::string, Rational> values;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  const Rational& at(const std::string& name) const;
  void set(const std::string& name, Rational value);
  /// Copies every entry of other into this assignment (overwriting).
  void merge(const Assignment& other);
};

bool operator==(const Assignment& a, const Assignment& b);

/// Sparse exact linear expression: sum of coefficient * variable + constant.
/// Zero coefficients are never stored.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(Rational constant) : constant_(std::move(constant)) {}

  static LinearExpr term(const std::string& name, Rational coefficient);

  const std::map<std::string, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }

  /// Adds coefficient * name, dropping the entry if it cancels to zero.
  void add_term(const std::string& name, const Rational& coefficient);
  void add_constant(const Rational& value) { constant_ += value; }

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr scaled(const Rational& factor) const;
  LinearExpr negated() const { return scaled(Rational(-1)); }

  bool references(const std::string& name) const {
    return terms_.count(name) != 0;
  }

  /// Folds every variable present in the fragment into the constant. Missing
  /// variables stay symbolic.
  LinearExpr substitute(const Assignment& fragment) const;

 private:
  std::map<std::string, Rational> terms_;
  Rational constant_ = Rational(0);
};

bool operator==(const LinearExpr& a, const LinearExpr& b);

/// Exact evaluation; throws InputError naming the first missing variable.
Rational evaluate(const LinearExpr& expr, const Assignment& assignment);

/// A named constraint, read as expr <= 0.
struct Constraint {
  std::string name;
  LinearExpr expr;
};

bool operator==(const Constraint& a, const Constraint& b);

/// One decision level: a minimized objective and its constraint list.
/// Constraints may reference variables of any level.
struct LevelProblem {
  int index = 0;
  LinearExpr objective;
  std::vector<Constraint> constraints;
};

bool operator==(const LevelProblem& a, const LevelProblem& b);

enum class ProtectionMode { ConstraintsOnly, ConstraintsAndObjective };

/// Describes which level may deviate from optimality, by how much, and which
/// upper levels protect their constraints against the deviation.
struct NearOptimalitySpec {
  int deviating_level = 1;
  Rational delta = Rational(0);
  std::set<int> protected_levels;
  ProtectionMode mode = ProtectionMode::ConstraintsOnly;
};

bool operator==(const NearOptimalitySpec& a, const NearOptimalitySpec& b);

/// An s+1-level problem. Level 0 is the top; level indices are contiguous.
struct MultilevelInstance {
  std::vector<LevelProblem> levels;
  std::vector<Variable> variables;
  std::optional<NearOptimalitySpec> nos;

  int bottom_level() const { return static_cast<int>(levels.size()) - 1; }
  const Variable* find_variable(const std::string& name) const;
  /// Throws InputError when absent.
  const Variable& variable(const std::string& name) const;
  std::vector<const Variable*> variables_at(int level) const;
  std::vector<const Variable*> variables_at_or_below(int level) const;
  std::vector<const Variable*> variables_above(int level) const;
};

bool operator==(const MultilevelInstance& a, const MultilevelInstance& b);

struct ValidationIssue {
  std::string kind;  // "property1", "bad_bounds", "unbounded_domain", "empty_level"
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool clean() const { return issues.empty(); }
};

/// Structural admissibility check. Reports, without failing:
///  - continuous variables of level i appearing in a level j > i (the
///    mixed-integer attainability criterion),
///  - missing bounds and lower > upper bounds,
///  - levels owning no variable.
ValidationReport validate(const MultilevelInstance& instance);

/// Runs validate() and throws SemanticError listing every issue when dirty.
void require_valid(const MultilevelInstance& instance);

/// Values of the variables whose level lies in [min_level, max_level];
/// variables absent from the assignment are skipped.
Assignment restrict_assignment(const MultilevelInstance& instance,
                               const Assignment& assignment, int min_level,
                               int max_level);

/// Substitutes the values of every variable above from_level into all
/// expressions, drops those variables and levels, and re-indexes the rest so
/// the returned instance is self-contained (the sub-problem faced by
/// from_level once everything above it is decided). A near-optimality spec,
/// when present, is shifted along; it must not protect a dropped level.
MultilevelInstance freeze_upper(const MultilevelInstance& instance,
                                const Assignment& upper_values,
                                int from_level);

enum class ArcKind { Parameterizes, Anticipates };

struct GraphArc {
  std::string from;
  std::string to;
  ArcKind kind;
};

bool operator==(const GraphArc& a, const GraphArc& b);

/// Level/adversary interaction graph with deterministic node ordering.
struct AnticipationGraph {
  std::vector<std::string> nodes;
  std::vector<GraphArc> arcs;

  /// DOT text: dashed edges labeled "param", solid edges labeled "anticipate".
  std::string to_dot() const;
};

/// One node per level plus one adversary node per (protected level,
/// protected constraint) pair. Every upper level anticipates and
/// parameterizes each level below it; each adversary is anticipated by all
/// levels from the top down to the deviating level and parameterized by its
/// protected level.
AnticipationGraph anticipation_graph(const MultilevelInstance& instance);

// --- JSON instance format (implemented in json_io.cpp) ---

/// Parses the JSON instance document, normalizing every constraint to
/// expr <= 0 (an optional "sense" of ">=" is negated, "==" expands into two
/// constraints) and rejecting maximization by convention (objectives are
/// always minimized). Errors name the offending entity.
MultilevelInstance parse_instance(const std::string& text);

/// Canonical serialization; parse(serialize(x)) is structurally equal to x.
std::string serialize_instance(const MultilevelInstance& instance);

/// Loads a candidate point {"var": "rat", ...}. Requires exact coverage of
/// the instance's variables; integrality and bounds are deliberately not
/// checked here (the verifier owns those steps).
Assignment parse_assignment(const std::string& text,
                            const MultilevelInstance& instance);

std::string serialize_assignment(const Assignment& assignment);

}  // namespace norobi
