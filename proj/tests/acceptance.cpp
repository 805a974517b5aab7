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

// Acceptance suite. Every criterion is exercised end to end at its stated
// tolerance (exact rational equality unless noted) and reported as one
// pass/fail line. The expected values come from the independent test-only
// oracles in oracle.cpp.

#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"
#include "norobi/reformulate.hpp"
#include "norobi/solve.hpp"
#include "norobi/subsolver.hpp"
#include "norobi/verify.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace norobi;
using norobi::testing::load_candidate;
using norobi::testing::load_fixture;
using norobi::testing::read_file;

namespace {

void expect(bool condition, const std::string& what) {
  if (!condition) throw std::runtime_error(what);
}

void expect_value(const OptResult& result, const Rational& value,
                  const std::string& what) {
  expect(result.is_optimal(), what + ": expected OPTIMAL");
  expect(*result.value == value,
         what + ": expected " + to_string(value) + ", got " +
             to_string(*result.value));
}

const std::vector<const char*> kAllFixtures = {
    "e1.json", "e1_infeasible.json", "e3.json", "e_tu.json", "g4.json"};
const std::vector<const char*> kBilevelFixtures = {
    "e1.json", "e1_infeasible.json", "e_tu.json"};
const std::vector<const char*> kIntegerBilevelFixtures = {
    "e1.json", "e1_infeasible.json"};

constexpr std::uint64_t kRandomInstances = 200;

// 1. The bilevel fixture's three variants at the three documented
//    tolerances, exact equality.
void criterion_fixture_compare() {
  const MultilevelInstance e1 = load_fixture("e1.json");

  const CompareResult at_one = compare(e1);
  expect_value(at_one.canonical, Rational(2), "canonical at delta 1");
  expect_value(at_one.norbip, Rational(4), "robust at delta 1");
  expect_value(at_one.norbip_alt, Rational(4), "protected at delta 1");

  MultilevelInstance at_zero_inst = e1;
  at_zero_inst.nos->delta = Rational(0);
  const CompareResult at_zero = compare(at_zero_inst);
  expect_value(at_zero.canonical, Rational(2), "canonical at delta 0");
  expect_value(at_zero.norbip, Rational(2), "robust at delta 0");
  expect_value(at_zero.norbip_alt, Rational(2), "protected at delta 0");

  MultilevelInstance at_two_inst = e1;
  at_two_inst.nos->delta = Rational(2);
  expect(solve_norbip(at_two_inst).status == SolveStatus::Infeasible,
         "robust problem at delta 2 must be infeasible");

  // Cross-check every value against the joint-enumeration oracles.
  expect(oracle::bip_direct(e1)->value == 2, "oracle canonical");
  expect(oracle::norbip_direct(e1)->value == 4, "oracle robust");
  expect(oracle::alt_direct(e1)->value == 4, "oracle protected");
  expect(!oracle::norbip_direct(at_two_inst).has_value(),
         "oracle robust at delta 2");
}

// 2. Ordering of the three variants on fixtures and 200 seeded random
//    instances, skipping pairs whose tighter problem is infeasible.
void criterion_ordering() {
  auto check_ordering = [](const MultilevelInstance& inst,
                           const std::string& what) {
    const CompareResult r = compare(inst);
    if (r.canonical.is_optimal() && r.norbip.is_optimal()) {
      expect(*r.canonical.value <= *r.norbip.value,
             what + ": canonical exceeds robust");
    }
    if (r.norbip.is_optimal() && r.norbip_alt.is_optimal()) {
      expect(*r.norbip.value <= *r.norbip_alt.value,
             what + ": robust exceeds objective-protected");
    }
  };
  for (const char* name : kBilevelFixtures) {
    check_ordering(load_fixture(name), name);
  }
  for (std::uint64_t seed = 1; seed <= kRandomInstances; ++seed) {
    check_ordering(oracle::random_bilevel(seed),
                   "random seed " + std::to_string(seed));
  }
}

// 3. The adversarial reformulation agrees with the literal semi-infinite
//    check on solver candidates and on perturbed candidates.
void criterion_semi_infinite_equivalence() {
  auto check_instance = [](const MultilevelInstance& inst,
                           const std::string& what) {
    const OptResult solved = solve_norbip(inst);
    const auto direct = oracle::norbip_direct(inst);
    expect(solved.is_optimal() == direct.has_value(),
           what + ": solver and oracle disagree on feasibility");
    std::vector<Assignment> candidates;
    if (solved.is_optimal()) {
      expect(*solved.value == direct->value,
             what + ": solver and oracle disagree on the value");
      candidates.push_back(*solved.witness);
      const VerificationReport at_value =
          verify_norbip(inst, *solved.witness, *solved.value);
      expect(at_value.accepted, what + ": solver witness rejected");
      for (std::uint64_t p = 0; p < 5; ++p) {
        candidates.push_back(
            oracle::perturb(inst, *solved.witness, p * 977 + 11));
      }
    }
    for (const auto& candidate : candidates) {
      const bool verdict =
          verify_norbip(inst, candidate, std::nullopt).accepted;
      const bool direct_verdict =
          oracle::norbip_verdict_direct(inst, candidate, std::nullopt);
      expect(verdict == direct_verdict,
             what + ": verifier and enumeration disagree");
    }
  };
  for (const char* name : kIntegerBilevelFixtures) {
    check_instance(load_fixture(name), name);
  }
  for (std::uint64_t seed = 1; seed <= kRandomInstances; ++seed) {
    check_instance(oracle::random_bilevel(seed),
                   "random seed " + std::to_string(seed));
  }
}

// 4. Tolerance sweeps are nondecreasing in value and antitone in
//    feasibility on every fixture.
void criterion_delta_monotonicity() {
  const std::vector<Rational> deltas = {
      Rational(0), parse_rational("1/2"), Rational(1), parse_rational("3/2"),
      Rational(2)};
  for (const char* name : kAllFixtures) {
    const auto sweep = delta_sweep(load_fixture(name), deltas);
    expect(sweep.size() == deltas.size(), std::string(name) + ": size");
    for (std::size_t i = 1; i < sweep.size(); ++i) {
      const auto& prev = sweep[i - 1].second;
      const auto& here = sweep[i].second;
      if (prev.is_optimal() && here.is_optimal()) {
        expect(*prev.value <= *here.value,
               std::string(name) + ": values decrease");
      }
      expect(!(!prev.is_optimal() && here.is_optimal()),
             std::string(name) + ": feasibility is not antitone");
    }
  }
  // Frozen expected profiles for the two bilevel fixtures (derived by the
  // joint-enumeration oracle) and the continuous one (vertex enumeration).
  const auto e1_sweep = delta_sweep(load_fixture("e1.json"), deltas);
  const Rational e1_expected[] = {Rational(2), Rational(2), Rational(4),
                                  Rational(4)};
  for (std::size_t i = 0; i < 4; ++i) {
    expect_value(e1_sweep[i].second, e1_expected[i], "e1 sweep");
  }
  expect(e1_sweep[4].second.status == SolveStatus::Infeasible,
         "e1 sweep tail");
  const auto tu_sweep = delta_sweep(load_fixture("e_tu.json"), deltas);
  for (std::size_t i = 0; i < 3; ++i) {
    expect_value(tu_sweep[i].second, Rational(-1), "e_tu sweep");
  }
  expect(tu_sweep[3].second.status == SolveStatus::Infeasible &&
             tu_sweep[4].second.status == SolveStatus::Infeasible,
         "e_tu sweep tail");
  // Spot-check the enumerated fixtures against the oracles per tolerance.
  for (const auto& delta : deltas) {
    MultilevelInstance e1 = load_fixture("e1.json");
    e1.nos->delta = delta;
    const auto direct = oracle::norbip_direct(e1);
    const OptResult solved = solve_norbip(e1);
    expect(solved.is_optimal() == direct.has_value(), "e1 sweep oracle");
    if (direct) expect(*solved.value == direct->value, "e1 sweep oracle");
  }
}

// 5. The verifiers execute exactly the documented step lists, and the
//    reports match the golden files byte for byte.
void criterion_step_fidelity() {
  const MultilevelInstance e1 = load_fixture("e1.json");
  const MultilevelInstance e3 = load_fixture("e3.json");
  const MultilevelInstance g4 = load_fixture("g4.json");

  const VerificationReport r1 =
      verify_norbip(e1, load_candidate("c_e1_good.json", e1), Rational(4));
  const VerificationReport r3 =
      verify_nomimlp(e3, load_candidate("c_e3_good.json", e3), Rational(6));
  const VerificationReport r4 =
      verify_gnormp(g4, load_candidate("c_g4_good.json", g4), Rational(5));

  const std::vector<std::string> norbip_labels = {
      "objective_bound",        "upper_feasibility", "lower_feasibility",
      "lower_optimality",       "worst_case_adversaries",
      "robust_feasibility"};
  const std::vector<std::string> nomimlp_labels = {
      "objective_bound", "variable_integrality", "tail_optimality",
      "worst_case_adversaries", "robust_feasibility"};
  const std::vector<std::string> gnormp_labels = {
      "objective_bound",        "all_level_feasibility", "bottom_optimality",
      "upper_level_optimality", "worst_case_adversaries",
      "robust_feasibility"};

  auto check_labels = [](const VerificationReport& report,
                         const std::vector<std::string>& expected,
                         const std::string& what) {
    expect(report.steps.size() == expected.size(), what + ": step count");
    for (std::size_t i = 0; i < expected.size(); ++i) {
      expect(report.steps[i].label == expected[i],
             what + ": step " + std::to_string(i + 1) + " label");
    }
  };
  check_labels(r1, norbip_labels, "bilevel report");
  check_labels(r3, nomimlp_labels, "multilevel report");
  check_labels(r4, gnormp_labels, "generalized report");
  expect(r4.steps[3].nested.size() == 1,
         "generalized report: one nested report per intermediate level");
  check_labels(r4.steps[3].nested[0], norbip_labels, "nested report");

  auto check_golden = [](const VerificationReport& report,
                         const std::string& name) {
    const std::string expected =
        read_file(std::string(NOROBI_GOLDEN_DIR) + "/" + name);
    expect(serialize_report(report) == expected,
           name + ": report differs from the golden file");
  };
  check_golden(r1, "report_e1.json");
  check_golden(r3, "report_e3.json");
  check_golden(r4, "report_g4.json");
}

// 6. Multilevel fixtures: the trilevel values, the generalized fixture's
//    manifest, and the two-level degeneration.
void criterion_multilevel() {
  const MultilevelInstance e3 = load_fixture("e3.json");
  expect_value(solve_canonical(e3), Rational(3), "trilevel canonical");
  expect_value(solve_norbip(e3), Rational(6), "trilevel robust");
  const auto e3_direct = oracle::nomimlp_direct(e3);
  expect(e3_direct.has_value() && e3_direct->value == 6,
         "trilevel oracle value");

  const MultilevelInstance g4 = load_fixture("g4.json");
  const Json manifest =
      Json::parse(read_file(norobi::testing::fixture_path("g4.manifest.json")));
  const OptResult solved = solve_gnormp(g4);
  expect_value(solved, parse_rational(manifest["value"].get<std::string>()),
               "generalized fixture value");
  for (const auto& [name, value] : manifest["witness"].items()) {
    expect(solved.witness->at(name) ==
               parse_rational(value.get<std::string>()),
           "generalized fixture witness: " + name);
  }
  const auto direct = oracle::gnormp_direct(g4);
  expect(direct.has_value() && direct->value == *solved.value &&
             direct->witness == *solved.witness,
         "generalized fixture oracle");
  // Adversary values recorded in the manifest, at the optimal decisions.
  const Assignment uppers =
      restrict_assignment(g4, *solved.witness, 0, g4.bottom_level() - 1);
  const Rational fstar =
      evaluate(g4.levels[g4.bottom_level()].objective, *solved.witness);
  const AdversarySet set = build_gnormp_adversaries(g4, uppers, fstar);
  for (const auto& entry : set.entries) {
    const std::string key =
        std::to_string(entry.level) + ":" + entry.constraint_name;
    const OptResult advr = solve_subproblem(*entry.problem);
    expect(advr.is_optimal() &&
               -*advr.value ==
                   parse_rational(manifest["adversaries"][key]
                                      .get<std::string>()),
           "generalized fixture adversary " + key);
  }

  const MultilevelInstance e1 = load_fixture("e1.json");
  const OptResult two_level = solve_gnormp(e1);
  const OptResult bilevel = solve_norbip(e1);
  expect(two_level.is_optimal() && bilevel.is_optimal() &&
             *two_level.value == *bilevel.value &&
             *two_level.witness == *bilevel.witness,
         "two-level degeneration");
}

// 7. The integrality-breaking demonstration on the continuous fixture.
void criterion_tu_demonstration() {
  const MultilevelInstance e_tu = load_fixture("e_tu.json");
  const Matrix box = constraint_matrix(e_tu, 1);
  expect(is_totally_unimodular(box), "box constraint matrix must pass");

  Assignment x;
  x.set("x", Rational(0));
  const LinearExpr cut =
      near_optimality_cut(e_tu, x, Rational(-3), Rational(1));
  const Matrix with_cut = append_row(box, coefficient_row(e_tu, 1, cut));
  expect(!is_totally_unimodular(with_cut),
         "appending the cut row must break total unimodularity");

  const Subproblem adversary =
      build_adversarial(e_tu, 0, 0, x, Rational(-3));
  const OptResult r = solve_subproblem(adversary);
  expect(r.is_optimal(), "adversarial LP must solve");
  expect(r.witness->at("y1") == parse_rational("1/2") &&
             r.witness->at("y2") == Rational(1),
         "adversarial LP witness must be the fractional vertex (1/2, 1)");
  expect(-*r.value == parse_rational("-1/10"),
         "worst-case constraint value must be -1/10");
}

// 8. Every optimal solver output is accepted by the matching verifier at
//    its own value and rejected at value - 1/1000.
void criterion_self_consistency() {
  const Rational epsilon = parse_rational("1/1000");
  for (const char* name : kAllFixtures) {
    const MultilevelInstance inst = load_fixture(name);
    const OptResult r = solve_auto(inst);
    if (!r.is_optimal()) continue;
    expect(verify_auto(inst, *r.witness, *r.value).accepted,
           std::string(name) + ": witness rejected at its own value");
    expect(!verify_auto(inst, *r.witness, *r.value - epsilon).accepted,
           std::string(name) + ": witness accepted below its value");
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const MultilevelInstance inst = oracle::random_bilevel(seed);
    const OptResult r = solve_norbip(inst);
    if (!r.is_optimal()) continue;
    expect(verify_norbip(inst, *r.witness, *r.value).accepted,
           "random witness rejected at its own value");
    expect(!verify_norbip(inst, *r.witness, *r.value - epsilon).accepted,
           "random witness accepted below its value");
  }
}

struct Criterion {
  int id;
  const char* summary;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "bilevel fixture variants at tolerances 1, 0, 2",
       criterion_fixture_compare},
      {2, "variant ordering on fixtures and 200 random instances",
       criterion_ordering},
      {3, "adversarial vs semi-infinite equivalence",
       criterion_semi_infinite_equivalence},
      {4, "tolerance sweeps are monotone", criterion_delta_monotonicity},
      {5, "verifier step lists and golden reports", criterion_step_fidelity},
      {6, "multilevel fixtures and degenerations", criterion_multilevel},
      {7, "cut breaks total unimodularity, fractional adversary",
       criterion_tu_demonstration},
      {8, "solver outputs verify at their own value",
       criterion_self_consistency},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    try {
      criterion.run();
      std::printf("[PASS] criterion %d: %s\n", criterion.id,
                  criterion.summary);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %d: %s\n       %s\n", criterion.id,
                  criterion.summary, e.what());
    }
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
