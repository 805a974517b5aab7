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

#include "norobi/solve.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <string>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"
#include "norobi/reformulate.hpp"

namespace norobi {

namespace {

bool lex_less(const MultilevelInstance& instance, const Assignment& a,
              const Assignment& b) {
  for (const auto& v : instance.variables) {
    const auto ia = a.values.find(v.name);
    const auto ib = b.values.find(v.name);
    if (ia == a.values.end() || ib == b.values.end()) continue;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return false;
}

struct TopCandidate {
  Rational value;
  Assignment full;
};

struct EvalContext {
  const MultilevelInstance& instance;
  bool robust;
  SolverLimits limits;
  std::vector<Variable> cont_top;        // continuous top variables
  std::set<std::string> cont_top_names;
  bool tail_all_integer = true;
};

void keep_better(const MultilevelInstance& instance,
                 std::optional<TopCandidate>& best, TopCandidate candidate) {
  if (!best || candidate.value < best->value ||
      (candidate.value == best->value &&
       lex_less(instance, candidate.full, best->full))) {
    best = std::move(candidate);
  }
}

/// Robust row for one protected constraint: the worst-case value of its
/// deviation-dependent part plus its terms on still-symbolic continuous top
/// variables. Returns nullopt when the constraint is insensitive or the
/// near-optimal set is empty (vacuous).
std::optional<LinearExpr> robust_row(const EvalContext& ctx,
                                     const Constraint& constraint,
                                     const WorstCase& wc) {
  if (wc.kind != WorstCase::Kind::Solved) return std::nullopt;
  LinearExpr row(*wc.value);
  for (const auto& [name, coeff] : constraint.expr.terms()) {
    if (ctx.cont_top_names.count(name) != 0) row.add_term(name, coeff);
  }
  return row;
}

/// Evaluates one top-level integer assignment: solves the tail, applies the
/// worst-case acceptance tests, and optimizes any continuous top variables
/// by an exact LP. Returns the best completion or nullopt when infeasible.
std::optional<TopCandidate> eval_top_candidate(const EvalContext& ctx,
                                               const Assignment& x_int) {
  const MultilevelInstance& inst = ctx.instance;
  const LevelProblem& top = inst.levels[0];
  std::optional<TopCandidate> best;

  if (ctx.tail_all_integer) {
    const auto optima = hierarchical_optima(inst, x_int, 1, ctx.limits);
    if (optima.empty()) return std::nullopt;

    std::vector<std::optional<LinearExpr>> robust_rows;
    if (ctx.robust) {
      Assignment first = x_int;
      first.merge(optima.front());
      const Rational fstar = evaluate(
          inst.levels[inst.nos->deviating_level].objective, first);
      for (std::size_t k = 0; k < top.constraints.size(); ++k) {
        const WorstCase wc = worst_case(inst, 0, k, x_int, fstar,
                                        ctx.cont_top_names, ctx.limits);
        auto row = robust_row(ctx, top.constraints[k], wc);
        if (row && ctx.cont_top.empty() && row->constant() > 0) {
          return std::nullopt;  // violated for every completion
        }
        robust_rows.push_back(std::move(row));
      }
    }

    for (const auto& v : optima) {
      Assignment point = x_int;
      point.merge(v);
      if (ctx.cont_top.empty()) {
        bool feasible = true;
        for (const auto& c : top.constraints) {
          if (evaluate(c.expr, point) > 0) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        keep_better(inst, best,
                    {evaluate(top.objective, point), std::move(point)});
      } else {
        Subproblem lp;
        lp.variables = ctx.cont_top;
        for (const auto& c : top.constraints) {
          lp.constraints.push_back({c.name, c.expr.substitute(point)});
        }
        for (const auto& row : robust_rows) {
          if (row) lp.constraints.push_back({"robust", *row});
        }
        lp.objective = top.objective.substitute(point);
        lp.frozen = point;
        const OptResult res = solve_lp(lp);
        if (!res.is_optimal()) continue;
        Assignment full = point;
        full.merge(*res.witness);
        keep_better(inst, best, {*res.value, std::move(full)});
      }
    }
    return best;
  }

  // Bilevel with a continuous bottom level: the optimistic selection over
  // the optimal face and any continuous top variables is one joint LP.
  const LevelProblem& low = inst.levels[1];
  Subproblem lower;
  for (const Variable* v : inst.variables_at(1)) lower.variables.push_back(*v);
  lower.objective = low.objective.substitute(x_int);
  for (const auto& c : low.constraints) {
    lower.constraints.push_back({c.name, c.expr.substitute(x_int)});
  }
  lower.frozen = x_int;
  const OptResult lowres = solve_lp(lower);
  if (!lowres.is_optimal()) return std::nullopt;
  const Rational fstar = *lowres.value;

  std::vector<std::optional<LinearExpr>> robust_rows;
  if (ctx.robust) {
    for (std::size_t k = 0; k < top.constraints.size(); ++k) {
      const WorstCase wc = worst_case(inst, 0, k, x_int, fstar,
                                      ctx.cont_top_names, ctx.limits);
      auto row = robust_row(ctx, top.constraints[k], wc);
      if (row && ctx.cont_top.empty() && row->constant() > 0) {
        return std::nullopt;
      }
      robust_rows.push_back(std::move(row));
    }
  }

  Subproblem joint;
  joint.variables = ctx.cont_top;
  for (const Variable* v : inst.variables_at(1)) joint.variables.push_back(*v);
  for (const auto& c : low.constraints) {
    joint.constraints.push_back({c.name, c.expr.substitute(x_int)});
  }
  LinearExpr face = low.objective.substitute(x_int);
  face.add_constant(-fstar);
  joint.constraints.push_back({"optimal_face", std::move(face)});
  for (const auto& c : top.constraints) {
    joint.constraints.push_back({c.name, c.expr.substitute(x_int)});
  }
  for (const auto& row : robust_rows) {
    if (row) joint.constraints.push_back({"robust", *row});
  }
  joint.objective = top.objective.substitute(x_int);
  joint.frozen = x_int;
  const OptResult res = solve_lp(joint);
  if (!res.is_optimal()) return std::nullopt;
  Assignment full = x_int;
  full.merge(*res.witness);
  return TopCandidate{*res.value, std::move(full)};
}

EvalContext make_context(const MultilevelInstance& instance, bool robust,
                         const SolveOptions& options) {
  EvalContext ctx{instance, robust, options.limits, {}, {}, true};
  for (const auto& v : instance.variables) {
    if (v.level == 0) {
      if (v.kind == VarKind::Continuous) {
        ctx.cont_top.push_back(v);
        ctx.cont_top_names.insert(v.name);
      }
    } else if (v.kind == VarKind::Continuous) {
      ctx.tail_all_integer = false;
    }
  }
  if (!ctx.tail_all_integer) {
    if (instance.levels.size() != 2) {
      throw InputError(
          "continuous variables below the top level are supported only in "
          "bilevel instances with an all-continuous bottom level");
    }
    for (const Variable* v : instance.variables_at(1)) {
      if (v->kind != VarKind::Continuous) {
        throw InputError(
            "mixed integer/continuous lower level is unsupported");
      }
    }
  }
  return ctx;
}

OptResult leader_enumeration(const MultilevelInstance& instance, bool robust,
                             const SolveOptions& options) {
  require_valid(instance);
  if (instance.levels.size() < 2) {
    throw InputError("solving requires at least two levels");
  }
  const EvalContext ctx = make_context(instance, robust, options);
  const auto candidates = level_grid_points(instance, 0, options.limits);

  std::vector<std::optional<TopCandidate>> results(candidates.size());
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || candidates.size() <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      results[i] = eval_top_candidate(ctx, candidates[i]);
    }
  } else {
    // Strided parallel evaluation; the sequential reduction below applies
    // the deterministic tie-break, so results match the serial order.
    std::vector<std::future<void>> futures;
    for (int w = 0; w < jobs; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w]() {
        for (std::size_t i = static_cast<std::size_t>(w);
             i < candidates.size(); i += static_cast<std::size_t>(jobs)) {
          results[i] = eval_top_candidate(ctx, candidates[i]);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  std::optional<TopCandidate> best;
  for (auto& r : results) {
    if (r) keep_better(instance, best, std::move(*r));
  }
  if (!best) return OptResult::infeasible();
  return OptResult::optimal(best->value, best->full);
}

void require_norbip_shape(const MultilevelInstance& instance) {
  if (!instance.nos.has_value()) {
    throw InputError("solve_norbip requires a near-optimality specification");
  }
  if (instance.nos->deviating_level != 1) {
    throw InputError(
        "solve_norbip supports a deviating level directly below the top; "
        "bottom-level deviations solve via solve_gnormp");
  }
}

}  // namespace

OptResult solve_canonical(const MultilevelInstance& instance,
                          const SolveOptions& options) {
  return leader_enumeration(instance, /*robust=*/false, options);
}

OptResult solve_norbip(const MultilevelInstance& instance,
                       const SolveOptions& options) {
  if (instance.nos.has_value() &&
      instance.nos->mode == ProtectionMode::ConstraintsAndObjective) {
    return solve_norbip(build_alt(instance), options);
  }
  require_norbip_shape(instance);
  return leader_enumeration(instance, /*robust=*/true, options);
}

namespace {

/// Worst-case acceptance test for one level of the generalized multilevel
/// problem: every sensitive constraint of `level` must withstand the bottom
/// deviation under the given upper decisions.
bool gnormp_level_robust(const MultilevelInstance& instance, int level,
                         const Assignment& uppers, const Rational& fstar,
                         const SolverLimits& limits) {
  const auto& constraints = instance.levels[level].constraints;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const WorstCase wc = worst_case(instance, level, k, uppers, fstar, {},
                                    limits);
    if (wc.kind == WorstCase::Kind::Solved && *wc.value > 0) return false;
  }
  return true;
}

}  // namespace

std::optional<GnormpOptimum> gnormp_optimal_set(
    const MultilevelInstance& instance, const Assignment& fixed, int level,
    const SolveOptions& options) {
  const int bottom = instance.bottom_level();
  const LevelProblem& here = instance.levels.at(level);
  bool have_best = false;
  Rational best_value;
  std::vector<Assignment> best;

  auto consider = [&](const Rational& value, Assignment tail) {
    if (!have_best || value < best_value) {
      have_best = true;
      best_value = value;
      best.clear();
      best.push_back(std::move(tail));
    } else if (value == best_value) {
      best.push_back(std::move(tail));
    }
  };

  for (const auto& point : level_grid_points(instance, level, options.limits)) {
    Assignment up = fixed;
    up.merge(point);
    if (level == bottom - 1) {
      const auto optima =
          hierarchical_optima(instance, up, bottom, options.limits);
      if (optima.empty()) continue;
      Assignment first = up;
      first.merge(optima.front());
      const Rational fstar =
          evaluate(instance.levels[bottom].objective, first);
      if (!gnormp_level_robust(instance, level, up, fstar, options.limits)) {
        continue;
      }
      for (const auto& v : optima) {
        Assignment full = up;
        full.merge(v);
        bool feasible = true;
        for (const auto& c : here.constraints) {
          if (evaluate(c.expr, full) > 0) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        Assignment tail = point;
        tail.merge(v);
        consider(evaluate(here.objective, full), std::move(tail));
      }
    } else {
      const auto sub = gnormp_optimal_set(instance, up, level + 1, options);
      if (!sub) continue;
      for (const auto& t : sub->optima) {
        Assignment full = up;
        full.merge(t);
        const Assignment uppers =
            restrict_assignment(instance, full, 0, bottom - 1);
        const OptResult bottom_opt =
            solve_hierarchical(instance, uppers, bottom, options.limits);
        if (!bottom_opt.is_optimal()) continue;
        if (!gnormp_level_robust(instance, level, uppers, *bottom_opt.value,
                                 options.limits)) {
          continue;
        }
        bool feasible = true;
        for (const auto& c : here.constraints) {
          if (evaluate(c.expr, full) > 0) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        Assignment tail = point;
        tail.merge(t);
        consider(evaluate(here.objective, full), std::move(tail));
      }
    }
  }

  if (!have_best) return std::nullopt;
  std::sort(best.begin(), best.end(),
            [&](const Assignment& a, const Assignment& b) {
              return lex_less(instance, a, b);
            });
  best.erase(std::unique(best.begin(), best.end()), best.end());
  return GnormpOptimum{std::move(best_value), std::move(best)};
}

OptResult solve_gnormp(const MultilevelInstance& instance,
                       const SolveOptions& options) {
  require_valid(instance);
  if (!instance.nos.has_value()) {
    throw InputError("solve_gnormp requires a near-optimality specification");
  }
  if (instance.levels.size() == 2) {
    return solve_norbip(instance, options);
  }
  const int bottom = instance.bottom_level();
  if (instance.nos->deviating_level != bottom) {
    throw InputError(
        "solve_gnormp requires the bottom level to be the deviating level");
  }
  std::set<int> all_upper;
  for (int i = 0; i < bottom; ++i) all_upper.insert(i);
  if (instance.nos->protected_levels != all_upper) {
    throw InputError(
        "solve_gnormp requires every upper level to be protected");
  }
  for (const auto& v : instance.variables) {
    if (v.kind != VarKind::Integer) {
      throw InputError(
          "the generalized multilevel solver requires integer variables; " +
          v.name + " is continuous");
    }
  }
  if (joint_grid_size(instance, 0) > options.limits.enumeration_cap) {
    throw CapError("instance too large for oracle: joint grid exceeds cap");
  }
  const auto top = gnormp_optimal_set(instance, Assignment{}, 0, options);
  if (!top) return OptResult::infeasible();
  return OptResult::optimal(top->value, top->optima.front());
}

OptResult solve_auto(const MultilevelInstance& instance,
                     const SolveOptions& options) {
  if (!instance.nos.has_value()) return solve_canonical(instance, options);
  const int d = instance.nos->deviating_level;
  if (d == 1 && instance.levels.size() >= 2 &&
      (instance.levels.size() == 2 ||
       instance.nos->protected_levels == std::set<int>{0})) {
    return solve_norbip(instance, options);
  }
  if (d == instance.bottom_level()) return solve_gnormp(instance, options);
  throw InputError("unsupported near-optimality configuration");
}

MultilevelInstance strip_nos(const MultilevelInstance& instance) {
  MultilevelInstance stripped = instance;
  stripped.nos.reset();
  return stripped;
}

CompareResult compare(const MultilevelInstance& instance,
                      const SolveOptions& options) {
  if (instance.levels.size() != 2 || !instance.nos.has_value()) {
    throw InputError("compare requires a bilevel instance with a "
                     "near-optimality specification");
  }
  CompareResult result;
  result.canonical = solve_canonical(instance, options);
  MultilevelInstance constraints_mode = instance;
  constraints_mode.nos->mode = ProtectionMode::ConstraintsOnly;
  result.norbip = solve_norbip(constraints_mode, options);
  result.norbip_alt = solve_norbip(build_alt(constraints_mode), options);

  auto check_order = [](const OptResult& a, const OptResult& b,
                        const char* which) {
    if (a.is_optimal() && b.is_optimal() && *a.value > *b.value) {
      throw InternalError(std::string("ordering violation: ") + which);
    }
  };
  check_order(result.canonical, result.norbip, "canonical > robust");
  check_order(result.norbip, result.norbip_alt,
              "robust > objective-protected");
  return result;
}

std::vector<std::pair<Rational, OptResult>> delta_sweep(
    const MultilevelInstance& instance, const std::vector<Rational>& deltas,
    const SolveOptions& options) {
  if (!instance.nos.has_value()) {
    throw InputError("delta_sweep requires a near-optimality specification");
  }
  if (deltas.empty()) throw InputError("delta_sweep requires at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 0) throw InputError("deltas must be nonnegative");
    if (i > 0 && deltas[i] <= deltas[i - 1]) {
      throw InputError("deltas must be strictly increasing");
    }
  }
  std::vector<std::pair<Rational, OptResult>> sweep;
  for (const auto& delta : deltas) {
    MultilevelInstance step = instance;
    step.nos->delta = delta;
    sweep.emplace_back(delta, solve_auto(step, options));
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const auto& prev = sweep[i - 1].second;
    const auto& here = sweep[i].second;
    if (prev.is_optimal() && here.is_optimal() && *here.value < *prev.value) {
      throw InternalError("delta sweep values are not nondecreasing");
    }
    if (!prev.is_optimal() && here.is_optimal()) {
      throw InternalError("delta sweep feasibility is not antitone");
    }
  }
  return sweep;
}

std::string serialize_result(const OptResult& result) {
  return dump_json(optresult_json(result));
}

std::string serialize_compare(const CompareResult& result) {
  Json j = Json::object();
  j["canonical"] = optresult_json(result.canonical);
  j["norbip"] = optresult_json(result.norbip);
  j["norbip_alt"] = optresult_json(result.norbip_alt);
  return dump_json(j);
}

std::string serialize_sweep(
    const std::vector<std::pair<Rational, OptResult>>& sweep) {
  Json j = Json::array();
  for (const auto& [delta, result] : sweep) {
    Json entry = Json::array();
    entry.push_back(rational_json(delta));
    entry.push_back(optresult_json(result));
    j.push_back(std::move(entry));
  }
  return dump_json(j);
}

}  // namespace norobi
