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

#include "norobi/verify.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"
#include "norobi/reformulate.hpp"

namespace norobi {

namespace {

std::string verdict_name(Verdict v) {
  return v == Verdict::Pass ? "PASS" : "FAIL";
}

std::string mode_name(VerifyMode m) {
  switch (m) {
    case VerifyMode::Norbip:
      return "NORBIP";
    case VerifyMode::Nomimlp:
      return "NOMIMLP";
    case VerifyMode::Gnormp:
      return "GNORMP";
  }
  return "UNKNOWN";
}

void require_candidate_coverage(const MultilevelInstance& instance,
                                const Assignment& candidate) {
  for (const auto& v : instance.variables) {
    if (!candidate.has(v.name)) {
      throw InputError("missing variable " + v.name + " in candidate");
    }
  }
  for (const auto& [name, value] : candidate.values) {
    if (instance.find_variable(name) == nullptr) {
      throw InputError("unknown variable " + name + " in candidate");
    }
  }
}

/// Step 1 of every procedure: objective value against the bound. A missing
/// bound makes the step vacuously pass.
VerificationStep objective_bound_step(const MultilevelInstance& instance,
                                      const Assignment& candidate,
                                      const std::optional<Rational>& bound) {
  VerificationStep step;
  step.label = "objective_bound";
  const Rational value = evaluate(instance.levels[0].objective, candidate);
  step.evidence = Json::object();
  step.evidence["objective"] = rational_json(value);
  if (bound) {
    step.evidence["bound"] = rational_json(*bound);
    step.verdict = value <= *bound ? Verdict::Pass : Verdict::Fail;
  } else {
    step.verdict = Verdict::Pass;
  }
  return step;
}

Json domain_violations(const MultilevelInstance& instance,
                       const Assignment& candidate, int min_level,
                       int max_level) {
  Json violations = Json::array();
  for (const auto& v : instance.variables) {
    if (v.level < min_level || v.level > max_level) continue;
    const Rational& value = candidate.at(v.name);
    if (v.kind == VarKind::Integer && !is_integral(value)) {
      Json j = Json::object();
      j["variable"] = v.name;
      j["value"] = rational_json(value);
      j["reason"] = "fractional";
      violations.push_back(std::move(j));
    }
    if ((v.lower && value < *v.lower) || (v.upper && value > *v.upper)) {
      Json j = Json::object();
      j["variable"] = v.name;
      j["value"] = rational_json(value);
      j["reason"] = "out_of_bounds";
      violations.push_back(std::move(j));
    }
  }
  return violations;
}

Json constraint_checks(const MultilevelInstance& instance, int level,
                       const Assignment& candidate, bool& all_ok) {
  Json checks = Json::array();
  for (const auto& c : instance.levels[level].constraints) {
    const Rational value = evaluate(c.expr, candidate);
    const bool ok = value <= 0;
    all_ok = all_ok && ok;
    Json j = Json::object();
    j["name"] = c.name;
    j["value"] = rational_json(value);
    j["satisfied"] = ok;
    checks.push_back(std::move(j));
  }
  return checks;
}

/// Feasibility of the candidate against the constraints and domains of the
/// levels in [min_level, max_level].
VerificationStep feasibility_step(const MultilevelInstance& instance,
                                  const Assignment& candidate,
                                  const std::string& label, int min_level,
                                  int max_level) {
  VerificationStep step;
  step.label = label;
  bool ok = true;
  Json levels = Json::array();
  for (int level = min_level; level <= max_level; ++level) {
    Json jl = Json::object();
    jl["level"] = level;
    jl["constraints"] = constraint_checks(instance, level, candidate, ok);
    levels.push_back(std::move(jl));
  }
  const Json domains =
      domain_violations(instance, candidate, min_level, max_level);
  ok = ok && domains.empty();
  step.evidence = Json::object();
  step.evidence["levels"] = std::move(levels);
  step.evidence["domain_violations"] = domains;
  step.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return step;
}

struct AdversaryOutcome {
  std::vector<WorstCase> cases;
  VerificationStep solve_step;
  VerificationStep check_step;
};

/// Steps "worst_case_adversaries" and "robust_feasibility" for the
/// constraints of one protected level: solve each sensitive adversary
/// (insensitive constraints are reported, not solved) and check the
/// constraint at its worst case.
AdversaryOutcome adversary_steps(const MultilevelInstance& instance,
                                 int protected_level,
                                 const Assignment& candidate,
                                 const Rational& fstar,
                                 const SolverLimits& limits) {
  AdversaryOutcome outcome;
  outcome.solve_step.label = "worst_case_adversaries";
  outcome.check_step.label = "robust_feasibility";
  Json solved = Json::array();
  Json checks = Json::array();
  bool solve_ok = true;
  bool check_ok = true;

  const auto& constraints = instance.levels[protected_level].constraints;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const Constraint& c = constraints[k];
    Json js = Json::object();
    js["constraint"] = c.name;
    Json jc = Json::object();
    jc["constraint"] = c.name;
    WorstCase wc;
    try {
      wc = worst_case(instance, protected_level, k, candidate, fstar, {},
                      limits);
    } catch (const CapError& e) {
      // Oracle resource errors surface as a failed step with diagnostics.
      solve_ok = false;
      js["error"] = std::string(e.what());
      solved.push_back(std::move(js));
      jc["error"] = "adversary unsolved";
      check_ok = false;
      checks.push_back(std::move(jc));
      outcome.cases.push_back(wc);
      continue;
    }
    switch (wc.kind) {
      case WorstCase::Kind::Insensitive: {
        js["insensitive"] = true;
        const Rational value = evaluate(c.expr, candidate);
        jc["insensitive"] = true;
        jc["value"] = rational_json(value);
        jc["satisfied"] = value <= 0;
        check_ok = check_ok && value <= 0;
        break;
      }
      case WorstCase::Kind::EmptySet: {
        js["near_optimal_set_empty"] = true;
        jc["vacuous"] = true;
        break;
      }
      case WorstCase::Kind::Solved: {
        js["worst_value"] = rational_json(*wc.value);
        js["witness"] = assignment_json(*wc.witness);
        jc["value"] = rational_json(*wc.value);
        jc["satisfied"] = *wc.value <= 0;
        check_ok = check_ok && *wc.value <= 0;
        break;
      }
    }
    solved.push_back(std::move(js));
    checks.push_back(std::move(jc));
    outcome.cases.push_back(std::move(wc));
  }
  outcome.solve_step.evidence = Json::object();
  outcome.solve_step.evidence["adversaries"] = std::move(solved);
  outcome.solve_step.verdict = solve_ok ? Verdict::Pass : Verdict::Fail;
  outcome.check_step.evidence = Json::object();
  outcome.check_step.evidence["constraints"] = std::move(checks);
  outcome.check_step.verdict = check_ok ? Verdict::Pass : Verdict::Fail;
  return outcome;
}

void finalize(VerificationReport& report) {
  report.accepted =
      std::all_of(report.steps.begin(), report.steps.end(),
                  [](const VerificationStep& s) {
                    return s.verdict == Verdict::Pass;
                  });
}

}  // namespace

VerificationReport verify_norbip(const MultilevelInstance& instance,
                                 const Assignment& candidate,
                                 const std::optional<Rational>& bound,
                                 const SolverLimits& limits) {
  require_valid(instance);
  if (instance.levels.size() != 2 || !instance.nos.has_value()) {
    throw InputError("verify_norbip requires a bilevel instance with a "
                     "near-optimality specification");
  }
  if (instance.nos->mode == ProtectionMode::ConstraintsAndObjective) {
    throw InputError(
        "objective-protected instances are verified through their "
        "materialized variant (build_alt)");
  }
  require_candidate_coverage(instance, candidate);

  VerificationReport report;
  report.mode = VerifyMode::Norbip;
  report.steps.push_back(objective_bound_step(instance, candidate, bound));
  report.steps.push_back(
      feasibility_step(instance, candidate, "upper_feasibility", 0, 0));
  report.steps.push_back(
      feasibility_step(instance, candidate, "lower_feasibility", 1, 1));

  // Lower optimality: the candidate's lower value must equal the oracle
  // optimum (equality: <= plus feasibility implies it, and the report shows
  // both values).
  VerificationStep optimality;
  optimality.label = "lower_optimality";
  const Rational candidate_value =
      evaluate(instance.levels[1].objective, candidate);
  const OptResult lower = solve_hierarchical(
      instance, restrict_assignment(instance, candidate, 0, 0), 1, limits);
  optimality.evidence = Json::object();
  optimality.evidence["candidate_value"] = rational_json(candidate_value);
  if (lower.is_optimal()) {
    optimality.evidence["optimal_value"] = rational_json(*lower.value);
    optimality.verdict =
        candidate_value == *lower.value ? Verdict::Pass : Verdict::Fail;
  } else {
    optimality.evidence["status"] = to_string(lower.status);
    optimality.verdict = Verdict::Fail;
  }
  report.steps.push_back(std::move(optimality));

  AdversaryOutcome adversaries =
      adversary_steps(instance, 0, candidate, candidate_value, limits);
  report.steps.push_back(std::move(adversaries.solve_step));
  report.steps.push_back(std::move(adversaries.check_step));
  finalize(report);
  return report;
}

VerificationReport verify_nomimlp(const MultilevelInstance& instance,
                                  const Assignment& candidate,
                                  const std::optional<Rational>& bound,
                                  const SolverLimits& limits) {
  require_valid(instance);
  if (instance.levels.size() < 3 || !instance.nos.has_value() ||
      instance.nos->deviating_level != 1 ||
      instance.nos->protected_levels != std::set<int>{0}) {
    throw InputError(
        "verify_nomimlp requires at least three levels with the level below "
        "the top deviating and the top level protected");
  }
  require_candidate_coverage(instance, candidate);

  VerificationReport report;
  report.mode = VerifyMode::Nomimlp;
  report.steps.push_back(objective_bound_step(instance, candidate, bound));

  VerificationStep integrality;
  integrality.label = "variable_integrality";
  const Json violations = domain_violations(instance, candidate, 0,
                                            instance.bottom_level());
  integrality.evidence = Json::object();
  integrality.evidence["violations"] = violations;
  integrality.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  report.steps.push_back(std::move(integrality));

  // Tail optimality: the candidate tail must be a member of the optimistic
  // optimal set of the problem below the top, parameterized by the top
  // decision.
  VerificationStep tail;
  tail.label = "tail_optimality";
  tail.evidence = Json::object();
  const Rational candidate_value =
      evaluate(instance.levels[1].objective, candidate);
  tail.evidence["candidate_value"] = rational_json(candidate_value);
  const Assignment top = restrict_assignment(instance, candidate, 0, 0);
  const Assignment candidate_tail =
      restrict_assignment(instance, candidate, 1, instance.bottom_level());
  const auto optima = hierarchical_optima(instance, top, 1, limits);
  if (optima.empty()) {
    tail.evidence["status"] = "INFEASIBLE";
    tail.verdict = Verdict::Fail;
  } else {
    Assignment first = top;
    first.merge(optima.front());
    tail.evidence["optimal_value"] =
        rational_json(evaluate(instance.levels[1].objective, first));
    const bool member =
        std::find(optima.begin(), optima.end(), candidate_tail) !=
        optima.end();
    tail.evidence["optimal"] = member;
    tail.verdict = member ? Verdict::Pass : Verdict::Fail;
  }
  report.steps.push_back(std::move(tail));

  AdversaryOutcome adversaries =
      adversary_steps(instance, 0, candidate, candidate_value, limits);
  report.steps.push_back(std::move(adversaries.solve_step));
  report.steps.push_back(std::move(adversaries.check_step));
  finalize(report);
  return report;
}

VerificationReport verify_gnormp(const MultilevelInstance& instance,
                                 const Assignment& candidate,
                                 const std::optional<Rational>& bound,
                                 const SolverLimits& limits) {
  require_valid(instance);
  const int bottom = instance.bottom_level();
  std::set<int> all_upper;
  for (int i = 0; i < bottom; ++i) all_upper.insert(i);
  if (instance.levels.size() < 2 || !instance.nos.has_value() ||
      instance.nos->deviating_level != bottom ||
      instance.nos->protected_levels != all_upper) {
    throw InputError(
        "verify_gnormp requires the bottom level deviating and every upper "
        "level protected");
  }
  require_candidate_coverage(instance, candidate);

  VerificationReport report;
  report.mode = VerifyMode::Gnormp;
  report.steps.push_back(objective_bound_step(instance, candidate, bound));
  report.steps.push_back(feasibility_step(instance, candidate,
                                          "all_level_feasibility", 0, bottom));

  VerificationStep optimality;
  optimality.label = "bottom_optimality";
  const Rational bottom_value =
      evaluate(instance.levels[bottom].objective, candidate);
  const OptResult bottom_opt = solve_hierarchical(
      instance, restrict_assignment(instance, candidate, 0, bottom - 1),
      bottom, limits);
  optimality.evidence = Json::object();
  optimality.evidence["candidate_value"] = rational_json(bottom_value);
  if (bottom_opt.is_optimal()) {
    optimality.evidence["optimal_value"] = rational_json(*bottom_opt.value);
    optimality.verdict =
        bottom_value == *bottom_opt.value ? Verdict::Pass : Verdict::Fail;
  } else {
    optimality.evidence["status"] = to_string(bottom_opt.status);
    optimality.verdict = Verdict::Fail;
  }
  report.steps.push_back(std::move(optimality));

  // Each intermediate level must have chosen an optimal decision for its own
  // robust problem, re-solved here with every higher decision frozen. One
  // nested report per level.
  VerificationStep uppers;
  uppers.label = "upper_level_optimality";
  Json level_entries = Json::array();
  bool uppers_ok = true;
  for (int level = 1; level < bottom; ++level) {
    const MultilevelInstance frozen = freeze_upper(instance, candidate, level);
    Assignment sub_candidate;
    for (const auto& v : frozen.variables) {
      sub_candidate.set(v.name, candidate.at(v.name));
    }
    SolveOptions sub_options;
    sub_options.limits = limits;
    const OptResult sub_opt = solve_auto(frozen, sub_options);
    Json entry = Json::object();
    entry["level"] = level;
    entry["candidate_value"] = rational_json(
        evaluate(frozen.levels[0].objective, sub_candidate));
    std::optional<Rational> sub_bound;
    if (sub_opt.is_optimal()) {
      entry["optimal_value"] = rational_json(*sub_opt.value);
      sub_bound = *sub_opt.value;
    } else {
      entry["status"] = to_string(sub_opt.status);
    }
    VerificationReport nested =
        verify_auto(frozen, sub_candidate, sub_bound, limits);
    const bool ok = sub_opt.is_optimal() && nested.accepted;
    entry["verdict"] = ok ? "PASS" : "FAIL";
    uppers_ok = uppers_ok && ok;
    level_entries.push_back(std::move(entry));
    uppers.nested.push_back(std::move(nested));
  }
  uppers.evidence = Json::object();
  uppers.evidence["levels"] = std::move(level_entries);
  uppers.verdict = uppers_ok ? Verdict::Pass : Verdict::Fail;
  report.steps.push_back(std::move(uppers));

  AdversaryOutcome adversaries =
      adversary_steps(instance, 0, candidate, bottom_value, limits);
  report.steps.push_back(std::move(adversaries.solve_step));
  report.steps.push_back(std::move(adversaries.check_step));
  finalize(report);
  return report;
}

VerificationReport verify_auto(const MultilevelInstance& instance,
                               const Assignment& candidate,
                               const std::optional<Rational>& bound,
                               const SolverLimits& limits) {
  if (!instance.nos.has_value()) {
    throw InputError("verification requires a near-optimality specification");
  }
  const int d = instance.nos->deviating_level;
  if (instance.levels.size() == 2) {
    return verify_norbip(instance, candidate, bound, limits);
  }
  if (d == 1) return verify_nomimlp(instance, candidate, bound, limits);
  if (d == instance.bottom_level()) {
    return verify_gnormp(instance, candidate, bound, limits);
  }
  throw InputError("unsupported near-optimality configuration");
}

Json report_json(const VerificationReport& report) {
  Json j = Json::object();
  j["mode"] = mode_name(report.mode);
  j["overall"] = report.accepted ? "ACCEPT" : "REJECT";
  Json steps = Json::array();
  for (const auto& step : report.steps) {
    Json js = Json::object();
    js["label"] = step.label;
    js["verdict"] = verdict_name(step.verdict);
    js["evidence"] = step.evidence;
    if (!step.nested.empty()) {
      Json nested = Json::array();
      for (const auto& sub : step.nested) nested.push_back(report_json(sub));
      js["nested"] = std::move(nested);
    }
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j;
}

std::string serialize_report(const VerificationReport& report) {
  return dump_json(report_json(report));
}

}  // namespace norobi
