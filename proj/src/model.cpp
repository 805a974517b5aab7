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

#include "norobi/model.hpp"

#include <algorithm>
#include <sstream>

#include "norobi/errors.hpp"

namespace norobi {

bool operator==(const Variable& a, const Variable& b) {
  return a.name == b.name && a.level == b.level && a.kind == b.kind &&
         a.lower == b.lower && a.upper == b.upper;
}

const Rational& Assignment::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) {
    throw InputError("missing variable " + name);
  }
  return it->second;
}

void Assignment::set(const std::string& name, Rational value) {
  values[name] = std::move(value);
}

void Assignment::merge(const Assignment& other) {
  for (const auto& [name, value] : other.values) values[name] = value;
}

bool operator==(const Assignment& a, const Assignment& b) {
  return a.values == b.values;
}

LinearExpr LinearExpr::term(const std::string& name, Rational coefficient) {
  LinearExpr e;
  e.add_term(name, coefficient);
  return e;
}

void LinearExpr::add_term(const std::string& name,
                          const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.emplace(name, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [name, coeff] : other.terms_) add_term(name, coeff);
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const auto& [name, coeff] : other.terms_) add_term(name, -coeff);
  constant_ -= other.constant_;
  return *this;
}

LinearExpr LinearExpr::scaled(const Rational& factor) const {
  LinearExpr result;
  if (factor == 0) return result;
  for (const auto& [name, coeff] : terms_) {
    result.terms_.emplace(name, coeff * factor);
  }
  result.constant_ = constant_ * factor;
  return result;
}

LinearExpr LinearExpr::substitute(const Assignment& fragment) const {
  LinearExpr result;
  result.constant_ = constant_;
  for (const auto& [name, coeff] : terms_) {
    auto it = fragment.values.find(name);
    if (it == fragment.values.end()) {
      result.terms_.emplace(name, coeff);
    } else {
      result.constant_ += coeff * it->second;
    }
  }
  return result;
}

bool operator==(const LinearExpr& a, const LinearExpr& b) {
  return a.terms() == b.terms() && a.constant() == b.constant();
}

Rational evaluate(const LinearExpr& expr, const Assignment& assignment) {
  Rational total = expr.constant();
  for (const auto& [name, coeff] : expr.terms()) {
    auto it = assignment.values.find(name);
    if (it == assignment.values.end()) {
      throw InputError("missing variable " + name);
    }
    total += coeff * it->second;
  }
  return total;
}

bool operator==(const Constraint& a, const Constraint& b) {
  return a.name == b.name && a.expr == b.expr;
}

bool operator==(const LevelProblem& a, const LevelProblem& b) {
  return a.index == b.index && a.objective == b.objective &&
         a.constraints == b.constraints;
}

bool operator==(const NearOptimalitySpec& a, const NearOptimalitySpec& b) {
  return a.deviating_level == b.deviating_level && a.delta == b.delta &&
         a.protected_levels == b.protected_levels && a.mode == b.mode;
}

const Variable* MultilevelInstance::find_variable(
    const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

const Variable& MultilevelInstance::variable(const std::string& name) const {
  const Variable* v = find_variable(name);
  if (v == nullptr) throw InputError("unknown variable " + name);
  return *v;
}

std::vector<const Variable*> MultilevelInstance::variables_at(
    int level) const {
  std::vector<const Variable*> result;
  for (const auto& v : variables) {
    if (v.level == level) result.push_back(&v);
  }
  return result;
}

std::vector<const Variable*> MultilevelInstance::variables_at_or_below(
    int level) const {
  std::vector<const Variable*> result;
  for (const auto& v : variables) {
    if (v.level >= level) result.push_back(&v);
  }
  return result;
}

std::vector<const Variable*> MultilevelInstance::variables_above(
    int level) const {
  std::vector<const Variable*> result;
  for (const auto& v : variables) {
    if (v.level < level) result.push_back(&v);
  }
  return result;
}

bool operator==(const MultilevelInstance& a, const MultilevelInstance& b) {
  return a.levels == b.levels && a.variables == b.variables && a.nos == b.nos;
}

namespace {

void check_property1(const MultilevelInstance& instance,
                     std::vector<ValidationIssue>& issues) {
  auto scan_expr = [&](const LinearExpr& expr, int level,
                       const std::string& where) {
    for (const auto& [name, coeff] : expr.terms()) {
      const Variable* v = instance.find_variable(name);
      if (v == nullptr || v->kind != VarKind::Continuous) continue;
      if (level > v->level) {
        issues.push_back(
            {"property1", "continuous variable " + name + " of level " +
                              std::to_string(v->level) + " appears in " +
                              where + " of level " + std::to_string(level)});
      }
    }
  };
  for (const auto& level : instance.levels) {
    scan_expr(level.objective, level.index, "objective");
    for (const auto& c : level.constraints) {
      scan_expr(c.expr, level.index, "constraint " + c.name);
    }
  }
}

}  // namespace

ValidationReport validate(const MultilevelInstance& instance) {
  ValidationReport report;
  for (const auto& v : instance.variables) {
    if (!v.lower.has_value() || !v.upper.has_value()) {
      report.issues.push_back(
          {"unbounded_domain", "variable " + v.name + " has no finite " +
                                   (v.lower ? "upper" : "lower") + " bound"});
    } else if (*v.lower > *v.upper) {
      report.issues.push_back({"bad_bounds", "variable " + v.name +
                                                 " has lower bound " +
                                                 to_string(*v.lower) +
                                                 " above upper bound " +
                                                 to_string(*v.upper)});
    }
  }
  for (const auto& level : instance.levels) {
    if (instance.variables_at(level.index).empty()) {
      report.issues.push_back(
          {"empty_level",
           "level " + std::to_string(level.index) + " owns no variable"});
    }
  }
  if (instance.nos) {
    const auto& nos = *instance.nos;
    if (nos.deviating_level <= 0 ||
        nos.deviating_level > instance.bottom_level()) {
      report.issues.push_back(
          {"bad_nos", "deviating level " +
                          std::to_string(nos.deviating_level) +
                          " is out of range"});
    }
    if (nos.delta < 0) {
      report.issues.push_back({"bad_nos", "delta is negative"});
    }
    if (nos.protected_levels.empty()) {
      report.issues.push_back({"bad_nos", "no protected level"});
    }
    for (int p : nos.protected_levels) {
      if (p < 0 || p >= nos.deviating_level) {
        report.issues.push_back(
            {"bad_nos", "protected level " + std::to_string(p) +
                            " is not strictly above the deviating level"});
      }
    }
    if (nos.mode == ProtectionMode::ConstraintsAndObjective &&
        nos.protected_levels != std::set<int>{0}) {
      report.issues.push_back(
          {"bad_nos",
           "objective protection requires exactly the top level protected"});
    }
  }
  check_property1(instance, report.issues);
  return report;
}

void require_valid(const MultilevelInstance& instance) {
  const ValidationReport report = validate(instance);
  if (report.clean()) return;
  std::ostringstream msg;
  msg << "instance is not solver-admissible:";
  for (const auto& issue : report.issues) {
    msg << "\n  [" << issue.kind << "] " << issue.detail;
  }
  throw SemanticError(msg.str());
}

Assignment restrict_assignment(const MultilevelInstance& instance,
                               const Assignment& assignment, int min_level,
                               int max_level) {
  Assignment result;
  for (const auto& v : instance.variables) {
    if (v.level < min_level || v.level > max_level) continue;
    auto it = assignment.values.find(v.name);
    if (it != assignment.values.end()) result.set(v.name, it->second);
  }
  return result;
}

MultilevelInstance freeze_upper(const MultilevelInstance& instance,
                                const Assignment& upper_values,
                                int from_level) {
  if (from_level <= 0 || from_level > instance.bottom_level()) {
    throw InputError("freeze_upper: from_level " +
                     std::to_string(from_level) + " is out of range");
  }
  Assignment upper =
      restrict_assignment(instance, upper_values, 0, from_level - 1);
  for (const auto& v : instance.variables) {
    if (v.level < from_level && !upper.has(v.name)) {
      throw InputError("freeze_upper: missing value for variable " + v.name);
    }
  }
  MultilevelInstance frozen;
  for (const auto& v : instance.variables) {
    if (v.level < from_level) continue;
    Variable copy = v;
    copy.level -= from_level;
    frozen.variables.push_back(std::move(copy));
  }
  for (int i = from_level; i <= instance.bottom_level(); ++i) {
    LevelProblem level;
    level.index = i - from_level;
    level.objective = instance.levels[i].objective.substitute(upper);
    for (const auto& c : instance.levels[i].constraints) {
      level.constraints.push_back({c.name, c.expr.substitute(upper)});
    }
    frozen.levels.push_back(std::move(level));
  }
  if (instance.nos) {
    if (instance.nos->deviating_level < from_level) {
      throw InputError("freeze_upper: the deviating level would be dropped");
    }
    NearOptimalitySpec nos;
    nos.deviating_level = instance.nos->deviating_level - from_level;
    nos.delta = instance.nos->delta;
    nos.mode = instance.nos->mode;
    for (int p : instance.nos->protected_levels) {
      if (p >= from_level) nos.protected_levels.insert(p - from_level);
    }
    if (!nos.protected_levels.empty() && nos.deviating_level >= 1) {
      frozen.nos = std::move(nos);
    }
  }
  return frozen;
}

bool operator==(const GraphArc& a, const GraphArc& b) {
  return a.from == b.from && a.to == b.to && a.kind == b.kind;
}

std::string AnticipationGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph anticipation {\n";
  for (const auto& node : nodes) {
    out << "  \"" << node << "\";\n";
  }
  for (const auto& arc : arcs) {
    out << "  \"" << arc.from << "\" -> \"" << arc.to << "\" ";
    if (arc.kind == ArcKind::Parameterizes) {
      out << "[style=dashed, label=\"param\"];\n";
    } else {
      out << "[style=solid, label=\"anticipate\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

AnticipationGraph anticipation_graph(const MultilevelInstance& instance) {
  AnticipationGraph graph;
  const int levels = static_cast<int>(instance.levels.size());
  const int bottom = levels - 1;

  const bool gnormp_shape = instance.nos.has_value() && levels >= 3 &&
                            instance.nos->deviating_level == bottom;

  // Level node names follow the hierarchy: the bilevel pair is U/L, a
  // deviating intermediate level gives U, L1..Ls, and a deviating bottom
  // level under several upper levels gives U1..Us, L.
  std::vector<std::string> level_name(levels);
  if (levels == 2) {
    level_name[0] = "U";
    level_name[1] = "L";
  } else if (gnormp_shape) {
    for (int i = 0; i < bottom; ++i) {
      level_name[i] = "U" + std::to_string(i + 1);
    }
    level_name[bottom] = "L";
  } else {
    level_name[0] = "U";
    for (int i = 1; i < levels; ++i) {
      level_name[i] = "L" + std::to_string(i);
    }
  }
  for (int i = 0; i < levels; ++i) graph.nodes.push_back(level_name[i]);

  // Adversary nodes, one per (protected level, protected constraint).
  struct AdversaryNode {
    int level;
    std::string name;
  };
  std::vector<AdversaryNode> adversaries;
  if (instance.nos.has_value()) {
    std::size_t total = 0;
    for (int p : instance.nos->protected_levels) {
      total += instance.levels[p].constraints.size();
    }
    int rank = 0;
    for (int p : instance.nos->protected_levels) {
      ++rank;
      const auto& constraints = instance.levels[p].constraints;
      for (std::size_t k = 0; k < constraints.size(); ++k) {
        std::string name;
        if (total == 1) {
          name = "A";
        } else if (constraints.size() == 1) {
          name = "A" + std::to_string(rank);
        } else {
          name = "A" + std::to_string(rank) + "." + std::to_string(k + 1);
        }
        adversaries.push_back({p, name});
        graph.nodes.push_back(name);
      }
    }
  }

  for (int i = 0; i < levels; ++i) {
    for (int j = i + 1; j < levels; ++j) {
      graph.arcs.push_back({level_name[i], level_name[j], ArcKind::Anticipates});
      graph.arcs.push_back(
          {level_name[i], level_name[j], ArcKind::Parameterizes});
    }
  }
  if (instance.nos.has_value()) {
    const int d = instance.nos->deviating_level;
    for (const auto& adv : adversaries) {
      for (int i = 0; i <= d && i < levels; ++i) {
        graph.arcs.push_back({level_name[i], adv.name, ArcKind::Anticipates});
      }
      graph.arcs.push_back(
          {level_name[adv.level], adv.name, ArcKind::Parameterizes});
    }
  }
  return graph;
}

}  // namespace norobi
