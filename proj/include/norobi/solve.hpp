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

#include <utility>
#include <vector>

#include "norobi/model.hpp"
#include "norobi/subsolver.hpp"

namespace norobi {

struct SolveOptions {
  SolverLimits limits;
  /// Leader-candidate evaluations run on this many workers. The reduction
  /// applies the deterministic tie-break, so any jobs value returns
  /// bit-identical results.
  int jobs = 1;
};

/// Optimistic exact solve of the canonical problem (near-optimality spec,
/// if any, is ignored): enumerate top-level integer assignments, solve the
/// tail optimistically, keep candidates satisfying every constraint, and
/// minimize the top objective. Ties break lexicographically.
OptResult solve_canonical(const MultilevelInstance& instance,
                          const SolveOptions& options = {});

/// Near-optimal robust solve: same enumeration with the additional
/// acceptance test that every adversary of the candidate is satisfied.
/// Instances protecting the objective are materialized via build_alt first.
/// Supports the bilevel shape and the multilevel shape where the topmost
/// intermediate level deviates.
OptResult solve_norbip(const MultilevelInstance& instance,
                       const SolveOptions& options = {});

/// Generalized multilevel solve where the bottom level deviates and every
/// upper level protects its own constraints through its own adversary.
/// Recursive; the two-level case coincides with solve_norbip.
OptResult solve_gnormp(const MultilevelInstance& instance,
                       const SolveOptions& options = {});

/// Routes to the solver matching the instance configuration.
OptResult solve_auto(const MultilevelInstance& instance,
                     const SolveOptions& options = {});

/// The optimal set of the generalized multilevel subproblem rooted at
/// `level` with all higher decisions fixed; used by the recursive verifier.
struct GnormpOptimum {
  Rational value;
  std::vector<Assignment> optima;  // assignments over variables at/below level
};
std::optional<GnormpOptimum> gnormp_optimal_set(
    const MultilevelInstance& instance, const Assignment& fixed, int level,
    const SolveOptions& options = {});

struct CompareResult {
  OptResult canonical;
  OptResult norbip;
  OptResult norbip_alt;
};

/// Solves the canonical, robust, and objective-protected variants and
/// asserts canonical <= robust <= objective-protected on the optimal values
/// (an ordering violation is an internal-consistency error, never user
/// input).
CompareResult compare(const MultilevelInstance& instance,
                      const SolveOptions& options = {});

/// One robust solve per delta; deltas must be nonnegative and strictly
/// increasing. Values are nondecreasing and feasibility is antitone in
/// delta; a violation raises an internal-consistency error.
std::vector<std::pair<Rational, OptResult>> delta_sweep(
    const MultilevelInstance& instance, const std::vector<Rational>& deltas,
    const SolveOptions& options = {});

/// Copy of the instance without its near-optimality spec.
MultilevelInstance strip_nos(const MultilevelInstance& instance);

std::string serialize_result(const OptResult& result);
std::string serialize_compare(const CompareResult& result);
std::string serialize_sweep(
    const std::vector<std::pair<Rational, OptResult>>& sweep);

}  // namespace norobi
