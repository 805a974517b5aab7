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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "norobi/model.hpp"
#include "norobi/reformulate.hpp"

namespace norobi {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

/// Outcome of an exact solve. The witness satisfies every constraint and
/// achieves the value exactly. Unbounded never occurs for validated
/// instances (all domains finite); seeing it signals a construction bug.
struct OptResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Rational> value;
  std::optional<Assignment> witness;

  static OptResult optimal(Rational value, Assignment witness);
  static OptResult infeasible();
  static OptResult unbounded();
  bool is_optimal() const { return status == SolveStatus::Optimal; }
};

std::string to_string(SolveStatus status);

struct SolverLimits {
  /// Maximum number of candidate points an exhaustive scan may visit.
  std::int64_t enumeration_cap = 10'000'000;
  /// Maximum rows*cols accepted by the total-unimodularity check.
  std::size_t tu_cap = 144;
};

/// Exact primal simplex (two phases, Bland's anti-cycling rule) over
/// rationals. Requires all free variables continuous with finite bounds;
/// bounds are handled as explicit constraint rows. Deterministic.
OptResult solve_lp(const Subproblem& problem);

/// Exhaustive scan of the integer grid. Ties are broken by the
/// lexicographically smallest witness in variable-declaration order.
/// Throws CapError when the grid exceeds the enumeration cap.
OptResult enumerate_integer(const Subproblem& problem,
                            const SolverLimits& limits = {});

/// Oracle dispatcher: LP for all-continuous, exhaustive scan for
/// all-integer; mixed free variables are rejected.
OptResult solve_subproblem(const Subproblem& problem,
                           const SolverLimits& limits = {});

/// All jointly optimal tail assignments from from_level down, under the
/// optimistic convention (each level minimizes its own objective, deeper
/// ties surface upward as multiple optima). Tail variables must be integer.
/// Returned assignments cover exactly the tail variables, sorted
/// lexicographically in declaration order.
std::vector<Assignment> hierarchical_optima(const MultilevelInstance& instance,
                                            const Assignment& fixed,
                                            int from_level,
                                            const SolverLimits& limits = {});

/// Optimistic optimum of the tail starting at from_level with all higher
/// decisions fixed: value of from_level's objective plus the
/// lexicographically smallest optimal witness. A single continuous tail
/// level is solved as an LP.
OptResult solve_hierarchical(const MultilevelInstance& instance,
                             const Assignment& fixed, int from_level,
                             const SolverLimits& limits = {});

/// Worst near-optimal deviation against constraint k of protected_level.
/// value is the maximum over the near-optimal set of the constraint's
/// left-hand side, excluding terms on `symbolic` variables (those stay with
/// the caller); witness is the maximizing deviation, joint with the
/// optimistic response of any tail below the deviating level.
struct WorstCase {
  enum class Kind { Insensitive, EmptySet, Solved };
  Kind kind = Kind::Insensitive;
  std::optional<Rational> value;
  std::optional<Assignment> witness;
};

WorstCase worst_case(const MultilevelInstance& instance, int protected_level,
                     std::size_t k, const Assignment& upper,
                     const Rational& fstar,
                     const std::set<std::string>& symbolic = {},
                     const SolverLimits& limits = {});

/// All points of a level's own integer variables, in lexicographic order;
/// the level's continuous variables are left to the caller. Throws CapError
/// when the grid exceeds the enumeration cap.
std::vector<Assignment> level_grid_points(const MultilevelInstance& instance,
                                          int level,
                                          const SolverLimits& limits = {});

/// Product of the integer ranges of every variable at or below from_level.
Integer joint_grid_size(const MultilevelInstance& instance, int from_level);

/// Dense matrix of exact rationals.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Rational& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Rational& at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

/// Coefficient matrix of a level's constraints over that level's own
/// variables, rows in constraint order, columns in declaration order.
Matrix constraint_matrix(const MultilevelInstance& instance, int level);

/// Coefficient row of expr over the level's own variables.
std::vector<Rational> coefficient_row(const MultilevelInstance& instance,
                                      int level, const LinearExpr& expr);

Matrix append_row(const Matrix& m, const std::vector<Rational>& row);

/// Brute-force total unimodularity: entries must lie in {-1,0,1} (else
/// false immediately) and every square submatrix must have determinant in
/// {-1,0,1}. Throws CapError when rows*cols exceeds the configured cap.
bool is_totally_unimodular(const Matrix& m, const SolverLimits& limits = {});

}  // namespace norobi
