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

#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "norobi/errors.hpp"
#include "norobi/subsolver.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace norobi;
using norobi::testing::load_fixture;

namespace {

Variable make_var(const std::string& name, VarKind kind, const Rational& lb,
                  const Rational& ub) {
  Variable v;
  v.name = name;
  v.kind = kind;
  v.lower = lb;
  v.upper = ub;
  return v;
}

LinearExpr expr(std::initializer_list<std::pair<const char*, int>> terms,
                int constant = 0) {
  LinearExpr e;
  for (const auto& [name, coeff] : terms) e.add_term(name, Rational(coeff));
  e.add_constant(Rational(constant));
  return e;
}

// splitmix64 stream for the random LP tests; independent of the oracles'.
struct Stream {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int range(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

Subproblem random_lp(std::uint64_t seed, bool integer_kind) {
  Stream rng{seed * 0x9e3779b97f4a7c15ull + 17};
  Subproblem p;
  const int n = rng.range(1, 3);
  for (int j = 0; j < n; ++j) {
    const int lb = rng.range(-3, 2);
    p.variables.push_back(make_var(
        "y" + std::to_string(j),
        integer_kind ? VarKind::Integer : VarKind::Continuous, Rational(lb),
        Rational(lb + rng.range(0, 4))));
  }
  const int rows = rng.range(0, 4);
  for (int i = 0; i < rows; ++i) {
    LinearExpr e;
    for (int j = 0; j < n; ++j) {
      e.add_term("y" + std::to_string(j), Rational(rng.range(-3, 3)));
    }
    e.add_constant(Rational(rng.range(-4, 4)));
    p.constraints.push_back({"c" + std::to_string(i), e});
  }
  LinearExpr obj;
  for (int j = 0; j < n; ++j) {
    obj.add_term("y" + std::to_string(j), Rational(rng.range(-3, 3)));
  }
  obj.add_constant(Rational(rng.range(-2, 2)));
  p.objective = obj;
  return p;
}

}  // namespace

TEST_CASE("exact simplex on the box examples") {
  Subproblem p;
  p.variables = {make_var("y1", VarKind::Continuous, Rational(0), Rational(1)),
                 make_var("y2", VarKind::Continuous, Rational(0), Rational(1))};
  SUBCASE("minimize -2y1 - y2") {
    p.objective = expr({{"y1", -2}, {"y2", -1}});
    const OptResult r = solve_lp(p);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == -3);
    CHECK(r.witness->at("y1") == 1);
    CHECK(r.witness->at("y2") == 1);
  }
  SUBCASE("fractional vertex of the cut box") {
    p.objective = expr({{"y1", 1}});
    p.constraints.push_back({"cut", expr({{"y1", -2}, {"y2", -1}}, 2)});
    const OptResult r = solve_lp(p);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == parse_rational("1/2"));
    CHECK(r.witness->at("y1") == parse_rational("1/2"));
    CHECK(r.witness->at("y2") == 1);
  }
  SUBCASE("zero objective over a box") {
    p.objective = LinearExpr{};
    const OptResult r = solve_lp(p);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == 0);
  }
  SUBCASE("infeasible rows") {
    p.objective = expr({{"y1", 1}});
    p.constraints.push_back({"impossible", expr({{"y1", 1}}, 1)});  // y1 <= -1
    CHECK(solve_lp(p).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("simplex agrees with vertex enumeration on random LPs") {
  int optimal_seen = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const Subproblem p = random_lp(seed, /*integer_kind=*/false);
    const OptResult fast = solve_lp(p);
    const auto slow = oracle::lp_min_by_vertex_enumeration(p);
    if (!slow.has_value()) {
      CHECK(fast.status == SolveStatus::Infeasible);
      continue;
    }
    ++optimal_seen;
    REQUIRE(fast.is_optimal());
    CHECK(*fast.value == slow->first);
    // The witness satisfies every constraint exactly and attains the value.
    Rational objective = p.objective.constant();
    for (const auto& [name, coeff] : p.objective.terms()) {
      objective += coeff * fast.witness->at(name);
    }
    CHECK(objective == *fast.value);
    for (const auto& c : p.constraints) {
      CHECK(evaluate(c.expr, *fast.witness) <= 0);
    }
    for (const auto& v : p.variables) {
      CHECK(fast.witness->at(v.name) >= *v.lower);
      CHECK(fast.witness->at(v.name) <= *v.upper);
    }
  }
  CHECK(optimal_seen > 50);
}

TEST_CASE("simplex is deterministic") {
  const Subproblem p = random_lp(7, false);
  const OptResult a = solve_lp(p);
  const OptResult b = solve_lp(p);
  REQUIRE(a.status == b.status);
  if (a.is_optimal()) {
    CHECK(*a.value == *b.value);
    CHECK(*a.witness == *b.witness);
  }
}

TEST_CASE("integer enumeration") {
  Subproblem p;
  p.variables = {make_var("v", VarKind::Integer, Rational(0), Rational(2))};
  SUBCASE("bilevel lower level at x = 2") {
    p.objective = expr({{"v", -1}});
    p.constraints.push_back({"clow", expr({{"v", 1}}, -2)});
    const OptResult r = enumerate_integer(p);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == -2);
    CHECK(r.witness->at("v") == 2);
  }
  SUBCASE("empty feasible set") {
    p.objective = expr({{"v", 1}});
    p.constraints.push_back({"impossible", expr({{"v", 1}}, 1)});
    CHECK(enumerate_integer(p).status == SolveStatus::Infeasible);
  }
  SUBCASE("ties break to the lexicographically smallest point") {
    Subproblem q;
    q.variables = {make_var("a", VarKind::Integer, Rational(0), Rational(1)),
                   make_var("b", VarKind::Integer, Rational(0), Rational(1))};
    q.objective = LinearExpr{};
    const OptResult r = enumerate_integer(q);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == 0);
    CHECK(r.witness->at("a") == 0);
    CHECK(r.witness->at("b") == 0);
  }
  SUBCASE("cap exceeded is an explicit error") {
    SolverLimits limits;
    limits.enumeration_cap = 2;
    p.objective = expr({{"v", 1}});
    CHECK_THROWS_WITH_AS(enumerate_integer(p, limits),
                         doctest::Contains("too large for oracle"), CapError);
  }
  SUBCASE("fractional bounds round inward") {
    Subproblem q;
    q.variables = {make_var("a", VarKind::Integer, parse_rational("1/2"),
                            parse_rational("5/2"))};
    q.objective = expr({{"a", 1}});
    const OptResult r = enumerate_integer(q);
    REQUIRE(r.is_optimal());
    CHECK(r.witness->at("a") == 1);
  }
}

TEST_CASE("the oracle dispatcher rejects mixed subproblems") {
  Subproblem p;
  p.variables = {make_var("a", VarKind::Integer, Rational(0), Rational(1)),
                 make_var("b", VarKind::Continuous, Rational(0), Rational(1))};
  p.objective = expr({{"a", 1}, {"b", 1}});
  CHECK_THROWS_WITH_AS(solve_subproblem(p),
                       doctest::Contains("mixed free variables unsupported"),
                       InputError);
  Subproblem ints;
  ints.variables = {make_var("a", VarKind::Integer, Rational(0), Rational(1))};
  ints.objective = expr({{"a", 1}});
  CHECK(solve_subproblem(ints).is_optimal());
  Subproblem conts;
  conts.variables = {
      make_var("a", VarKind::Continuous, Rational(0), Rational(1))};
  conts.objective = expr({{"a", 1}});
  CHECK(solve_subproblem(conts).is_optimal());
}

TEST_CASE("LP relaxation agrees with enumeration on difference systems") {
  // Difference constraints have an interval-matrix structure, so the LP
  // optimum sits at an integral vertex and must match the exhaustive scan.
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Stream rng{seed * 0x2545f4914f6cdd1dull + 3};
    const int n = rng.range(2, 3);
    Subproblem ip;
    for (int j = 0; j < n; ++j) {
      const int lb = rng.range(-3, 0);
      ip.variables.push_back(make_var("y" + std::to_string(j),
                                      VarKind::Integer, Rational(lb),
                                      Rational(lb + rng.range(1, 4))));
    }
    const int rows = rng.range(1, 3);
    for (int i = 0; i < rows; ++i) {
      const int a = rng.range(0, n - 1);
      int b = rng.range(0, n - 1);
      if (b == a) b = (b + 1) % n;
      LinearExpr e;
      e.add_term("y" + std::to_string(a), Rational(1));
      e.add_term("y" + std::to_string(b), Rational(-1));
      e.add_constant(Rational(rng.range(-2, 2)));
      ip.constraints.push_back({"d" + std::to_string(i), e});
    }
    LinearExpr obj;
    for (int j = 0; j < n; ++j) {
      obj.add_term("y" + std::to_string(j), Rational(rng.range(-2, 2)));
    }
    ip.objective = obj;

    Subproblem relaxation = ip;
    for (auto& v : relaxation.variables) v.kind = VarKind::Continuous;

    const OptResult exact = enumerate_integer(ip);
    const OptResult relaxed = solve_lp(relaxation);
    REQUIRE(exact.status == relaxed.status);
    if (exact.is_optimal()) {
      CHECK(*exact.value == *relaxed.value);
    }
  }
}

TEST_CASE("hierarchical tail solving") {
  const MultilevelInstance e3 = load_fixture("e3.json");
  SUBCASE("the documented tail at x = 2") {
    Assignment fixed;
    fixed.set("x", Rational(2));
    const OptResult r = solve_hierarchical(e3, fixed, 1);
    REQUIRE(r.is_optimal());
    CHECK(*r.value == -2);
    CHECK(r.witness->at("y1") == 2);
    CHECK(r.witness->at("y2") == 2);
  }
  SUBCASE("single-level tail equals the oracle dispatcher") {
    Assignment fixed;
    fixed.set("x", Rational(2));
    fixed.set("y1", Rational(1));
    const OptResult tail = solve_hierarchical(e3, fixed, 2);
    Subproblem direct;
    direct.variables = {
        make_var("y2", VarKind::Integer, Rational(0), Rational(2))};
    direct.objective = expr({{"y2", -1}});
    direct.constraints.push_back({"c2", expr({{"y2", 1}}, -1)});
    const OptResult byhand = solve_subproblem(direct);
    REQUIRE(tail.is_optimal());
    REQUIRE(byhand.is_optimal());
    CHECK(*tail.value == *byhand.value);
    CHECK(tail.witness->at("y2") == byhand.witness->at("y2"));
  }
  SUBCASE("contradictory tail constraints are infeasible") {
    MultilevelInstance inst = e3;
    inst.levels[2].constraints.push_back(
        {"never", expr({{"y2", -1}}, 5)});  // y2 >= 5 over [0,2]
    Assignment fixed;
    fixed.set("x", Rational(1));
    CHECK(solve_hierarchical(inst, fixed, 1).status ==
          SolveStatus::Infeasible);
  }
}

TEST_CASE("two-level tails match the argmin-then-argmin double loop") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const MultilevelInstance inst = oracle::random_bilevel(seed);
    const auto direct = oracle::two_level_tail_direct(inst, Assignment{}, 0);
    const OptResult fast = solve_hierarchical(inst, Assignment{}, 0);
    if (!direct.has_value()) {
      CHECK(fast.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(fast.is_optimal());
    CHECK(*fast.value == direct->value);
    CHECK(*fast.witness == direct->witness);
  }
}

TEST_CASE("worst cases against protected constraints") {
  const MultilevelInstance e1 = load_fixture("e1.json");
  SUBCASE("bilevel flat adversary") {
    Assignment x;
    x.set("x", Rational(2));
    const WorstCase wc = worst_case(e1, 0, 0, x, Rational(-2));
    REQUIRE(wc.kind == WorstCase::Kind::Solved);
    CHECK(*wc.value == 0);
    CHECK(wc.witness->at("v") == 1);
  }
  SUBCASE("violated at the smaller leader decision") {
    Assignment x;
    x.set("x", Rational(1));
    const WorstCase wc = worst_case(e1, 0, 0, x, Rational(-1));
    REQUIRE(wc.kind == WorstCase::Kind::Solved);
    CHECK(*wc.value == 1);
    CHECK(wc.witness->at("v") == 0);
  }
  SUBCASE("insensitive constraints are recognized") {
    MultilevelInstance inst = e1;
    inst.levels[0].constraints.push_back(
        {"only_x", expr({{"x", 1}}, -5)});
    Assignment x;
    x.set("x", Rational(2));
    CHECK(worst_case(inst, 0, 1, x, Rational(-2)).kind ==
          WorstCase::Kind::Insensitive);
  }
  SUBCASE("deviations above the bottom level respond through the tail") {
    const MultilevelInstance e3 = load_fixture("e3.json");
    Assignment x;
    x.set("x", Rational(2));
    const WorstCase wc = worst_case(e3, 0, 0, x, Rational(-2));
    REQUIRE(wc.kind == WorstCase::Kind::Solved);
    CHECK(*wc.value == 0);  // worst joint deviation (1,1)
    CHECK(wc.witness->at("y1") == 1);
    CHECK(wc.witness->at("y2") == 1);
  }
}

TEST_CASE("total unimodularity") {
  SUBCASE("identity") {
    Matrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 1) = 1;
    CHECK(is_totally_unimodular(m));
  }
  SUBCASE("a 2x2 with determinant 2") {
    Matrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 0) = -1;
    m.at(1, 1) = 1;
    CHECK(!is_totally_unimodular(m));
  }
  SUBCASE("entries outside -1,0,1 fail immediately") {
    Matrix m(1, 2);
    m.at(0, 0) = 2;
    CHECK(!is_totally_unimodular(m));
  }
  SUBCASE("interval matrix is totally unimodular") {
    Matrix m(3, 3);
    // consecutive-ones rows
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 1) = 1;
    m.at(1, 2) = 1;
    m.at(2, 2) = 1;
    CHECK(is_totally_unimodular(m));
  }
  SUBCASE("cap errors") {
    Matrix m(13, 13);
    SolverLimits limits;
    CHECK_THROWS_AS(is_totally_unimodular(m, limits), CapError);
  }
  SUBCASE("fixture demonstration") {
    const MultilevelInstance e_tu = load_fixture("e_tu.json");
    const Matrix box = constraint_matrix(e_tu, 1);
    CHECK(box.rows == 4);
    CHECK(box.cols == 2);
    CHECK(is_totally_unimodular(box));
    const Matrix with_cut =
        append_row(box, {Rational(-2), Rational(-1)});
    CHECK(!is_totally_unimodular(with_cut));
  }
}

TEST_CASE("grid points are lexicographic and respect the cap") {
  const MultilevelInstance e1 = load_fixture("e1.json");
  const auto points = level_grid_points(e1, 0);
  REQUIRE(points.size() == 3);
  CHECK(points[0].at("x") == 0);
  CHECK(points[2].at("x") == 2);
  SolverLimits limits;
  limits.enumeration_cap = 2;
  CHECK_THROWS_AS(level_grid_points(e1, 0, limits), CapError);
  CHECK(joint_grid_size(e1, 0) == 9);
}
