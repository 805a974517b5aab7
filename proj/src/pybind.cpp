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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"
#include "norobi/model.hpp"
#include "norobi/reformulate.hpp"
#include "norobi/solve.hpp"
#include "norobi/subsolver.hpp"
#include "norobi/verify.hpp"

namespace py = pybind11;
using namespace norobi;

namespace {

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list list;
      for (const auto& item : j) list.append(json_to_py(item));
      return list;
    }
    case Json::value_t::object: {
      py::dict dict;
      for (const auto& [key, value] : j.items()) {
        dict[py::str(key)] = json_to_py(value);
      }
      return dict;
    }
    default:
      throw InternalError("unexpected JSON value type");
  }
}

Assignment assignment_from_dict(const py::dict& values,
                                const MultilevelInstance& instance) {
  Json j = Json::object();
  for (const auto& item : values) {
    j[py::cast<std::string>(item.first)] = py::cast<std::string>(
        py::str(item.second));
  }
  return parse_assignment(j.dump(), instance);
}

SolveOptions make_options(std::int64_t oracle_cap, int jobs) {
  SolveOptions options;
  options.limits.enumeration_cap = oracle_cap;
  options.jobs = jobs;
  return options;
}

}  // namespace

PYBIND11_MODULE(_norobi, m) {
  m.doc() =
      "Exact solvers, reformulations, and certificate checkers for "
      "near-optimal robust multilevel optimization.";

  py::register_exception<ParseError>(m, "NorobiParseError", PyExc_ValueError);
  py::register_exception<SemanticError>(m, "NorobiSemanticError",
                                        PyExc_ValueError);
  py::register_exception<InputError>(m, "NorobiInputError", PyExc_ValueError);
  py::register_exception<CapError>(m, "NorobiCapError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "NorobiInternalError",
                                        PyExc_RuntimeError);

  py::class_<MultilevelInstance>(m, "Instance")
      .def_property_readonly("num_levels",
                             [](const MultilevelInstance& inst) {
                               return inst.levels.size();
                             })
      .def_property_readonly("variable_names",
                             [](const MultilevelInstance& inst) {
                               std::vector<std::string> names;
                               for (const auto& v : inst.variables) {
                                 names.push_back(v.name);
                               }
                               return names;
                             })
      .def("to_json", [](const MultilevelInstance& inst) {
        return serialize_instance(inst);
      });

  m.def("parse_instance", &parse_instance, py::arg("text"),
        "Parse an instance document from JSON text.");

  m.def("validate",
        [](const MultilevelInstance& inst) {
          py::list issues;
          for (const auto& issue : validate(inst).issues) {
            py::dict d;
            d["kind"] = issue.kind;
            d["detail"] = issue.detail;
            issues.append(d);
          }
          return issues;
        },
        py::arg("instance"),
        "Structural admissibility issues; empty means solver-admissible.");

  m.def("evaluate_objective",
        [](const MultilevelInstance& inst, int level, const py::dict& values) {
          const Assignment a = assignment_from_dict(values, inst);
          return to_string(evaluate(inst.levels.at(level).objective, a));
        },
        py::arg("instance"), py::arg("level"), py::arg("values"));

  m.def("solve",
        [](const MultilevelInstance& inst, std::int64_t oracle_cap, int jobs) {
          return json_to_py(
              optresult_json(solve_auto(inst, make_options(oracle_cap, jobs))));
        },
        py::arg("instance"),
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        py::arg("jobs") = 1,
        "Solve the instance, routing on its configuration.");

  m.def("solve_canonical",
        [](const MultilevelInstance& inst, std::int64_t oracle_cap, int jobs) {
          return json_to_py(optresult_json(
              solve_canonical(inst, make_options(oracle_cap, jobs))));
        },
        py::arg("instance"),
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        py::arg("jobs") = 1);

  m.def("compare",
        [](const MultilevelInstance& inst, std::int64_t oracle_cap, int jobs) {
          const CompareResult result =
              compare(inst, make_options(oracle_cap, jobs));
          py::dict d;
          d["canonical"] = json_to_py(optresult_json(result.canonical));
          d["norbip"] = json_to_py(optresult_json(result.norbip));
          d["norbip_alt"] = json_to_py(optresult_json(result.norbip_alt));
          return d;
        },
        py::arg("instance"),
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        py::arg("jobs") = 1,
        "Canonical, robust, and objective-protected optima.");

  m.def("verify",
        [](const MultilevelInstance& inst, const py::dict& candidate,
           const std::optional<std::string>& bound, std::int64_t oracle_cap) {
          MultilevelInstance target = inst;
          if (inst.nos.has_value() &&
              inst.nos->mode == ProtectionMode::ConstraintsAndObjective) {
            target = build_alt(inst);
          }
          const Assignment a = assignment_from_dict(candidate, target);
          std::optional<Rational> b;
          if (bound) b = parse_rational(*bound);
          SolverLimits limits;
          limits.enumeration_cap = oracle_cap;
          return json_to_py(report_json(verify_auto(target, a, b, limits)));
        },
        py::arg("instance"), py::arg("candidate"),
        py::arg("bound") = std::nullopt,
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        "Per-step certificate check of a candidate point.");

  m.def("delta_sweep",
        [](const MultilevelInstance& inst,
           const std::vector<std::string>& deltas, std::int64_t oracle_cap,
           int jobs) {
          std::vector<Rational> parsed;
          for (const auto& d : deltas) parsed.push_back(parse_rational(d));
          py::list entries;
          for (const auto& [delta, result] :
               delta_sweep(inst, parsed, make_options(oracle_cap, jobs))) {
            py::list pair;
            pair.append(py::str(to_string(delta)));
            pair.append(json_to_py(optresult_json(result)));
            entries.append(pair);
          }
          return entries;
        },
        py::arg("instance"), py::arg("deltas"),
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        py::arg("jobs") = 1);

  m.def("anticipation_graph_dot",
        [](const MultilevelInstance& inst) {
          return anticipation_graph(inst).to_dot();
        },
        py::arg("instance"),
        "DOT text of the level/adversary interaction graph.");

  m.def("emit_subproblems",
        [](const MultilevelInstance& inst, std::int64_t oracle_cap) {
          if (!inst.nos.has_value()) {
            throw InputError(
                "emit_subproblems requires a near-optimality specification");
          }
          SolveOptions options;
          options.limits.enumeration_cap = oracle_cap;
          const OptResult canonical = solve_canonical(inst, options);
          py::dict documents;
          if (!canonical.is_optimal()) return documents;
          const int d = inst.nos->deviating_level;
          const Assignment uppers =
              restrict_assignment(inst, *canonical.witness, 0, d - 1);
          const Rational fstar =
              evaluate(inst.levels[d].objective, *canonical.witness);
          documents["epigraph"] = serialize_subproblem(
              bind(epigraph_form(inst.levels[d], inst), uppers));
          if (d == inst.bottom_level()) {
            for (int p : inst.nos->protected_levels) {
              const auto& constraints = inst.levels[p].constraints;
              for (std::size_t k = 0; k < constraints.size(); ++k) {
                if (!constraint_sensitive(inst, p, k)) continue;
                documents[py::str("adversary_" + std::to_string(p) + "_" +
                                  constraints[k].name)] =
                    serialize_subproblem(
                        build_adversarial(inst, p, k, uppers, fstar));
              }
            }
          }
          return documents;
        },
        py::arg("instance"),
        py::arg("oracle_cap") = SolverLimits{}.enumeration_cap,
        "Ground subproblems at the canonical optimum, as JSON documents.");
}
