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

#include <string>

#include <json.hpp>

#include "norobi/model.hpp"
#include "norobi/subsolver.hpp"

namespace norobi {

using Json = nlohmann::ordered_json;

Json rational_json(const Rational& value);
Json assignment_json(const Assignment& assignment);
Json linexpr_json(const LinearExpr& expr);
Json optresult_json(const OptResult& result);
Json instance_json(const MultilevelInstance& instance);

/// Canonical dump: two-space indent, trailing newline. Identical inputs
/// produce byte-identical output on every platform.
std::string dump_json(const Json& value);

}  // namespace norobi
