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

#include "norobi/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "norobi/errors.hpp"
#include "norobi/json_io.hpp"
#include "norobi/model.hpp"
#include "norobi/reformulate.hpp"
#include "norobi/solve.hpp"
#include "norobi/subsolver.hpp"
#include "norobi/verify.hpp"

namespace norobi::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Rational> parse_deltas(const std::string& text) {
  std::vector<Rational> deltas;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, ',')) {
    deltas.push_back(parse_rational(current));
  }
  if (deltas.empty()) throw InputError("empty delta list");
  return deltas;
}

struct Output {
  std::string path;  // empty: stdout
  void write(std::ostream& out, const std::string& text) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open file " + path);
    file << text;
  }
};

int run_reformulate(const MultilevelInstance& instance,
                    const SolveOptions& options, const std::string& emit_dir,
                    const Output& output, std::ostream& out,
                    std::ostream& err) {
  if (!instance.nos.has_value()) {
    throw InputError("reformulate requires a near-optimality specification");
  }
  const OptResult canonical = solve_canonical(instance, options);
  if (!canonical.is_optimal()) {
    err << "canonical problem is " << to_string(canonical.status)
        << "; nothing to emit\n";
    return 3;
  }
  const int d = instance.nos->deviating_level;
  const Assignment uppers =
      restrict_assignment(instance, *canonical.witness, 0, d - 1);
  const Rational fstar =
      evaluate(instance.levels[d].objective, *canonical.witness);

  std::vector<std::pair<std::string, std::string>> documents;
  const Subproblem epigraph =
      bind(epigraph_form(instance.levels[d], instance), uppers);
  documents.emplace_back("epigraph", serialize_subproblem(epigraph));
  if (d == instance.bottom_level()) {
    for (int p : instance.nos->protected_levels) {
      const auto& constraints = instance.levels[p].constraints;
      for (std::size_t k = 0; k < constraints.size(); ++k) {
        if (!constraint_sensitive(instance, p, k)) continue;
        const Subproblem adversary =
            build_adversarial(instance, p, k, uppers, fstar);
        documents.emplace_back(
            "adversary_" + std::to_string(p) + "_" + constraints[k].name,
            serialize_subproblem(adversary));
      }
    }
  } else {
    err << "note: worst cases over the multilevel tail are nested solves; "
           "emitting the epigraph form only\n";
  }

  if (!emit_dir.empty()) {
    std::filesystem::create_directories(emit_dir);
    Json manifest = Json::array();
    for (const auto& [name, text] : documents) {
      const std::string path = emit_dir + "/" + name + ".json";
      std::ofstream file(path, std::ios::binary);
      if (!file) throw InputError("cannot open file " + path);
      file << text;
      manifest.push_back(path);
    }
    output.write(out, dump_json(manifest));
  } else {
    Json bundle = Json::object();
    for (const auto& [name, text] : documents) {
      bundle[name] = Json::parse(text);
    }
    output.write(out, dump_json(bundle));
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact toolkit for near-optimal robust multilevel problems"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string candidate_path;
  std::string bound_text;
  std::string deltas_text;
  std::string emit_dir;
  Output output;
  std::int64_t oracle_cap = SolverLimits{}.enumeration_cap;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("instance", instance_path, "instance JSON file")
        ->required();
    cmd->add_option("--oracle-cap", oracle_cap,
                    "enumeration cap for the exhaustive oracles")
        ->envname("NOROBI_ORACLE_CAP");
    cmd->add_option("--jobs", jobs, "worker count for leader enumeration");
    cmd->add_option("-o,--output", output.path, "write the result here");
    return cmd;
  };

  CLI::App* solve_cmd = add_common(app.add_subcommand("solve",
      "solve the instance (canonical, robust, or generalized multilevel)"));
  CLI::App* verify_cmd = add_common(app.add_subcommand("verify",
      "check a candidate point step by step"));
  verify_cmd->add_option("--candidate", candidate_path, "candidate JSON file")
      ->required();
  verify_cmd->add_option("--bound", bound_text,
                         "objective bound (default: none)");
  CLI::App* compare_cmd = add_common(app.add_subcommand("compare",
      "solve the canonical, robust, and objective-protected variants"));
  CLI::App* reformulate_cmd = add_common(app.add_subcommand("reformulate",
      "emit the epigraph form and adversarial subproblems"));
  reformulate_cmd->add_option("--emit-dir", emit_dir,
                              "write one JSON file per subproblem here");
  CLI::App* graph_cmd = add_common(app.add_subcommand("graph",
      "emit the anticipation graph in DOT format"));
  CLI::App* sweep_cmd = add_common(app.add_subcommand("sweep",
      "solve once per tolerance value"));
  sweep_cmd->add_option("--deltas", deltas_text,
                        "comma-separated increasing tolerances")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    SolveOptions options;
    options.limits.enumeration_cap = oracle_cap;
    options.jobs = jobs;
    const MultilevelInstance instance =
        parse_instance(read_file(instance_path));

    if (solve_cmd->parsed()) {
      const OptResult result = solve_auto(instance, options);
      output.write(out, serialize_result(result));
      return result.is_optimal() ? 0 : 3;
    }
    if (verify_cmd->parsed()) {
      MultilevelInstance target = instance;
      if (instance.nos.has_value() &&
          instance.nos->mode == ProtectionMode::ConstraintsAndObjective) {
        target = build_alt(instance);
      }
      const Assignment candidate =
          parse_assignment(read_file(candidate_path), target);
      std::optional<Rational> bound;
      if (!bound_text.empty()) bound = parse_rational(bound_text);
      const VerificationReport report =
          verify_auto(target, candidate, bound, options.limits);
      output.write(out, serialize_report(report));
      return report.accepted ? 0 : 3;
    }
    if (compare_cmd->parsed()) {
      const CompareResult result = compare(instance, options);
      output.write(out, serialize_compare(result));
      return 0;
    }
    if (reformulate_cmd->parsed()) {
      return run_reformulate(instance, options, emit_dir, output, out, err);
    }
    if (graph_cmd->parsed()) {
      require_valid(instance);
      output.write(out, anticipation_graph(instance).to_dot());
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const auto sweep =
          delta_sweep(instance, parse_deltas(deltas_text), options);
      output.write(out, serialize_sweep(sweep));
      return 0;
    }
    err << "error: no command\n";
    return 1;
  } catch (const CapError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace norobi::cli
