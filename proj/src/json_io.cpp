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

#include "norobi/json_io.hpp"

#include <set>
#include <string>

#include "norobi/errors.hpp"

namespace norobi {

namespace {

const Json& require_field(const Json& obj, const std::string& key,
                          const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SemanticError("missing field '" + key + "' in " + where);
  }
  return *it;
}

Rational rational_field(const Json& value, const std::string& where) {
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      throw SemanticError(std::string(e.what()) + " in " + where);
    }
  }
  if (value.is_number_integer()) {
    return Rational(Integer(value.get<std::int64_t>()));
  }
  throw SemanticError("expected a rational string in " + where);
}

LinearExpr expr_field(const Json& value, const std::string& where) {
  if (!value.is_object()) {
    throw SemanticError("expected a linear expression object in " + where);
  }
  LinearExpr expr;
  if (auto it = value.find("terms"); it != value.end()) {
    if (!it->is_object()) {
      throw SemanticError("'terms' must be an object in " + where);
    }
    for (const auto& [name, coeff] : it->items()) {
      expr.add_term(name, rational_field(coeff, "term " + name + " of " + where));
    }
  }
  if (auto it = value.find("constant"); it != value.end()) {
    expr.add_constant(rational_field(*it, "constant of " + where));
  }
  return expr;
}

void check_known_variables(const LinearExpr& expr,
                           const MultilevelInstance& instance,
                           const std::string& where) {
  for (const auto& [name, coeff] : expr.terms()) {
    if (instance.find_variable(name) == nullptr) {
      throw SemanticError("unknown variable " + name + " in " + where);
    }
  }
}

}  // namespace

MultilevelInstance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw SemanticError("instance document must be an object");

  MultilevelInstance instance;

  const Json& jlevels = require_field(doc, "levels", "instance");
  if (!jlevels.is_array() || jlevels.empty()) {
    throw SemanticError("'levels' must be a nonempty array");
  }
  const int level_count = static_cast<int>(jlevels.size());

  const Json& jvars = require_field(doc, "variables", "instance");
  if (!jvars.is_array() || jvars.empty()) {
    throw SemanticError("'variables' must be a nonempty array");
  }
  std::set<std::string> seen;
  for (const auto& jv : jvars) {
    Variable v;
    v.name = require_field(jv, "name", "variable").get<std::string>();
    if (v.name.empty()) throw SemanticError("variable with empty name");
    if (!seen.insert(v.name).second) {
      throw SemanticError("duplicate variable name " + v.name);
    }
    const std::string where = "variable " + v.name;
    v.level = require_field(jv, "level", where).get<int>();
    if (v.level < 0 || v.level >= level_count) {
      throw SemanticError(where + " declares level " +
                          std::to_string(v.level) + " but instance has " +
                          std::to_string(level_count) + " levels");
    }
    const std::string kind = require_field(jv, "kind", where).get<std::string>();
    if (kind == "int") {
      v.kind = VarKind::Integer;
    } else if (kind == "cont") {
      v.kind = VarKind::Continuous;
    } else {
      throw SemanticError(where + " has unknown kind '" + kind + "'");
    }
    v.lower = rational_field(require_field(jv, "lb", where), "lb of " + where);
    v.upper = rational_field(require_field(jv, "ub", where), "ub of " + where);
    if (*v.lower > *v.upper) {
      throw SemanticError(where + " has lower bound " + to_string(*v.lower) +
                          " above upper bound " + to_string(*v.upper));
    }
    instance.variables.push_back(std::move(v));
  }

  for (int i = 0; i < level_count; ++i) {
    const Json& jl = jlevels[i];
    const std::string lwhere = "level " + std::to_string(i);
    LevelProblem level;
    level.index = i;
    level.objective =
        expr_field(require_field(jl, "objective", lwhere), "objective of " + lwhere);
    check_known_variables(level.objective, instance, "objective of " + lwhere);
    if (auto it = jl.find("constraints"); it != jl.end()) {
      if (!it->is_array()) {
        throw SemanticError("'constraints' must be an array in " + lwhere);
      }
      std::set<std::string> names;
      auto add_constraint = [&](std::string name, LinearExpr expr) {
        if (!names.insert(name).second) {
          throw SemanticError("duplicate constraint name " + name + " in " +
                              lwhere);
        }
        check_known_variables(expr, instance,
                              "constraint " + name + " of " + lwhere);
        level.constraints.push_back({std::move(name), std::move(expr)});
      };
      for (const auto& jc : *it) {
        std::string name =
            require_field(jc, "name", "constraint of " + lwhere).get<std::string>();
        if (name.empty()) throw SemanticError("constraint with empty name in " + lwhere);
        const std::string cwhere = "constraint " + name + " of " + lwhere;
        LinearExpr expr = expr_field(require_field(jc, "expr", cwhere), cwhere);
        std::string sense = "<=";
        if (auto js = jc.find("sense"); js != jc.end()) {
          sense = js->get<std::string>();
        }
        // Normalization: everything is stored as expr <= 0.
        if (sense == "<=") {
          add_constraint(std::move(name), std::move(expr));
        } else if (sense == ">=") {
          add_constraint(std::move(name), expr.negated());
        } else if (sense == "==") {
          add_constraint(name + "__le", expr);
          add_constraint(name + "__ge", expr.negated());
        } else {
          throw SemanticError(cwhere + " has unknown sense '" + sense + "'");
        }
      }
    }
    instance.levels.push_back(std::move(level));
  }

  if (auto it = doc.find("near_optimality"); it != doc.end()) {
    const Json& jn = *it;
    const std::string nwhere = "near_optimality";
    NearOptimalitySpec nos;
    nos.deviating_level = require_field(jn, "deviating_level", nwhere).get<int>();
    if (nos.deviating_level == 0) {
      throw SemanticError("top level cannot deviate");
    }
    if (nos.deviating_level < 0 || nos.deviating_level >= level_count) {
      throw SemanticError("deviating level " +
                          std::to_string(nos.deviating_level) +
                          " is out of range");
    }
    nos.delta = rational_field(require_field(jn, "delta", nwhere),
                               "delta of " + nwhere);
    if (nos.delta < 0) throw SemanticError("delta must be nonnegative");
    const Json& jp = require_field(jn, "protected_levels", nwhere);
    if (!jp.is_array() || jp.empty()) {
      throw SemanticError("protected_levels must be a nonempty array");
    }
    for (const auto& jlvl : jp) {
      const int p = jlvl.get<int>();
      if (p < 0 || p >= nos.deviating_level) {
        throw SemanticError("protected level " + std::to_string(p) +
                            " is not strictly above deviating level " +
                            std::to_string(nos.deviating_level));
      }
      nos.protected_levels.insert(p);
    }
    const std::string mode =
        require_field(jn, "mode", nwhere).get<std::string>();
    if (mode == "constraints") {
      nos.mode = ProtectionMode::ConstraintsOnly;
    } else if (mode == "constraints_and_objective") {
      nos.mode = ProtectionMode::ConstraintsAndObjective;
      if (nos.protected_levels != std::set<int>{0}) {
        throw SemanticError(
            "mode constraints_and_objective requires protected_levels [0]");
      }
    } else {
      throw SemanticError("unknown near-optimality mode '" + mode + "'");
    }
    instance.nos = std::move(nos);
  }

  return instance;
}

Json rational_json(const Rational& value) { return to_string(value); }

Json linexpr_json(const LinearExpr& expr) {
  Json jterms = Json::object();
  for (const auto& [name, coeff] : expr.terms()) {
    jterms[name] = rational_json(coeff);
  }
  Json j = Json::object();
  j["terms"] = std::move(jterms);
  j["constant"] = rational_json(expr.constant());
  return j;
}

Json assignment_json(const Assignment& assignment) {
  Json j = Json::object();
  for (const auto& [name, value] : assignment.values) {
    j[name] = rational_json(value);
  }
  return j;
}

Json instance_json(const MultilevelInstance& instance) {
  Json j = Json::object();
  Json jvars = Json::array();
  for (const auto& v : instance.variables) {
    Json jv = Json::object();
    jv["name"] = v.name;
    jv["level"] = v.level;
    jv["kind"] = v.kind == VarKind::Integer ? "int" : "cont";
    if (v.lower) jv["lb"] = rational_json(*v.lower);
    if (v.upper) jv["ub"] = rational_json(*v.upper);
    jvars.push_back(std::move(jv));
  }
  j["variables"] = std::move(jvars);
  Json jlevels = Json::array();
  for (const auto& level : instance.levels) {
    Json jl = Json::object();
    jl["objective"] = linexpr_json(level.objective);
    Json jcs = Json::array();
    for (const auto& c : level.constraints) {
      Json jc = Json::object();
      jc["name"] = c.name;
      jc["expr"] = linexpr_json(c.expr);
      jcs.push_back(std::move(jc));
    }
    jl["constraints"] = std::move(jcs);
    jlevels.push_back(std::move(jl));
  }
  j["levels"] = std::move(jlevels);
  if (instance.nos) {
    Json jn = Json::object();
    jn["deviating_level"] = instance.nos->deviating_level;
    jn["delta"] = rational_json(instance.nos->delta);
    Json jp = Json::array();
    for (int p : instance.nos->protected_levels) jp.push_back(p);
    jn["protected_levels"] = std::move(jp);
    jn["mode"] = instance.nos->mode == ProtectionMode::ConstraintsOnly
                     ? "constraints"
                     : "constraints_and_objective";
    j["near_optimality"] = std::move(jn);
  }
  return j;
}

std::string dump_json(const Json& value) { return value.dump(2) + "\n"; }

std::string serialize_instance(const MultilevelInstance& instance) {
  return dump_json(instance_json(instance));
}

Assignment parse_assignment(const std::string& text,
                            const MultilevelInstance& instance) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw SemanticError("candidate must be an object");
  Assignment assignment;
  for (const auto& [name, value] : doc.items()) {
    if (instance.find_variable(name) == nullptr) {
      throw InputError("unknown variable " + name + " in candidate");
    }
    assignment.set(name, rational_field(value, "candidate value of " + name));
  }
  for (const auto& v : instance.variables) {
    if (!assignment.has(v.name)) {
      throw InputError("missing variable " + v.name + " in candidate");
    }
  }
  return assignment;
}

std::string serialize_assignment(const Assignment& assignment) {
  return dump_json(assignment_json(assignment));
}

Json optresult_json(const OptResult& result) {
  Json j = Json::object();
  j["status"] = to_string(result.status);
  if (result.is_optimal()) {
    j["value"] = rational_json(*result.value);
    j["witness"] = assignment_json(*result.witness);
  }
  return j;
}

}  // namespace norobi
