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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "norobi/model.hpp"
#include "norobi/solve.hpp"
#include "norobi/subsolver.hpp"

namespace norobi {

enum class Verdict { Pass, Fail };
enum class VerifyMode { Norbip, Nomimlp, Gnormp };

/// One executed verification step. Evidence carries the solver results or
/// exact values backing the verdict; nested holds the recursive per-level
/// reports of the generalized multilevel check.
struct VerificationStep {
  std::string label;
  Verdict verdict = Verdict::Pass;
  nlohmann::ordered_json evidence;
  std::vector<struct VerificationReport> nested;
};

/// Ordered per-step record of a certificate check. Accepted iff every step
/// passed; steps follow the respective proof procedure one-to-one.
struct VerificationReport {
  VerifyMode mode = VerifyMode::Norbip;
  std::vector<VerificationStep> steps;
  bool accepted = false;
};

/// Bilevel certificate check, six steps: objective bound, upper
/// feasibility, lower feasibility, lower optimality (exact equality against
/// the oracle optimum), worst-case adversaries, robust feasibility.
/// A missing bound makes the first step vacuously pass.
VerificationReport verify_norbip(const MultilevelInstance& instance,
                                 const Assignment& candidate,
                                 const std::optional<Rational>& bound,
                                 const SolverLimits& limits = {});

/// Multilevel certificate check with a deviating topmost intermediate
/// level, five steps: objective bound, variable integrality, tail
/// optimality, worst-case adversaries (deviations joint with optimistic
/// tail responses), robust feasibility.
VerificationReport verify_nomimlp(const MultilevelInstance& instance,
                                  const Assignment& candidate,
                                  const std::optional<Rational>& bound,
                                  const SolverLimits& limits = {});

/// Generalized multilevel certificate check, six steps: objective bound,
/// all-level feasibility, bottom optimality, per-intermediate-level
/// optimality (one nested report per level, produced by re-solving that
/// level's robust problem with upper decisions frozen), top-level
/// worst-case adversaries, robust feasibility.
VerificationReport verify_gnormp(const MultilevelInstance& instance,
                                 const Assignment& candidate,
                                 const std::optional<Rational>& bound,
                                 const SolverLimits& limits = {});

/// Routes to the verifier matching the instance configuration.
VerificationReport verify_auto(const MultilevelInstance& instance,
                               const Assignment& candidate,
                               const std::optional<Rational>& bound,
                               const SolverLimits& limits = {});

nlohmann::ordered_json report_json(const VerificationReport& report);
std::string serialize_report(const VerificationReport& report);

}  // namespace norobi
