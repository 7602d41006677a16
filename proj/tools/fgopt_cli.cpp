// Command-line harness: seeded experiment runs, the verification suite and
// the experiment catalog. Exit codes: 0 success, 1 criterion failure,
// 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgopt/acceptance.hpp"
#include "fgopt/harness.hpp"

using namespace fgopt;

namespace {

json parse_set_value(const std::string& text) {
  // Numbers, booleans and arrays parse as JSON; everything else is a string.
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);
  return v;
}

int cmd_run(const std::string& target, const std::string& out_dir, std::uint64_t seed, bool seed_given,
            const std::vector<std::string>& sets) {
  ExperimentSpec spec;
  if (target.size() > 5 && target.substr(target.size() - 5) == ".json") {
    std::ifstream is(target);
    if (!is) {
      std::cerr << "cannot open spec file '" << target << "'\n";
      return 2;
    }
    json doc = json::parse(is, nullptr, false);
    if (doc.is_discarded() || !doc.contains("name")) {
      std::cerr << "spec file must be a JSON document with a 'name' key\n";
      return 2;
    }
    spec.name = doc["name"].get<std::string>();
    spec.params = doc.value("params", json::object());
    spec.seed = doc.value("seed", 0ULL);
  } else {
    spec.name = target;
    spec.params = json::object();
  }
  if (seed_given) spec.seed = seed;
  spec.out_dir = out_dir;

  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--set expects key=value, got '" << kv << "'\n";
      return 2;
    }
    spec.params[kv.substr(0, eq)] = parse_set_value(kv.substr(eq + 1));
  }

  try {
    auto files = run_experiment(spec);
    for (const auto& f : files) std::cout << f << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& json_path) {
  std::vector<CriterionResult> rows;
  try {
    rows = run_acceptance_suite(suite);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  int failures = 0;
  std::printf("%-6s %-32s %-14s %-14s %s\n", "status", "criterion", "measured", "bound", "detail");
  for (const auto& r : rows) {
    if (!r.pass) ++failures;
    std::printf("%-6s %-32s %-14.6g %-14.6g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.bound,
                r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failures, rows.size());
  if (!json_path.empty()) {
    write_file_atomic(json_path, report_json(rows).dump(2) + "\n");
    std::printf("report written to %s\n", json_path.c_str());
  }
  return failures == 0 ? 0 : 1;
}

int cmd_list() {
  std::printf("experiments:\n");
  for (const auto& def : experiment_registry()) {
    std::printf("  %-24s %s\n", def.name.c_str(), def.description.c_str());
    std::printf("  %-24s defaults: %s\n", "", def.default_params.dump().c_str());
  }
  std::printf("game presets:\n ");
  for (const auto& name : preset_names()) std::printf(" %s", name.c_str());
  std::printf("\nverify suites: rates, equivalence, momentum, projection_free, saddle, all\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgopt: composable first-order optimization via two-player conjugate-game dynamics"};
  app.require_subcommand(1);

  std::string default_out = ".";
  if (const char* env = std::getenv("FGOPT_OUT_DIR")) default_out = env;

  auto* run = app.add_subcommand("run", "run a named experiment or a JSON spec file");
  std::string target, out_dir = default_out;
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
  run->add_option("target", target, "experiment name or spec.json path")->required();
  run->add_option("--out", out_dir, "output directory (default FGOPT_OUT_DIR or .)");
  auto* seed_opt = run->add_option("--seed", seed, "root seed (64-bit)");
  run->add_option("--set", sets, "parameter override key=value (repeatable)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite, json_path;
  verify->add_option("suite", suite, "rates | equivalence | momentum | projection_free | saddle | all")->required();
  verify->add_option("--json", json_path, "also write the report as JSON");

  auto* list = app.add_subcommand("list", "list experiments and presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(target, out_dir, seed, seed_opt->count() > 0, sets);
  if (verify->parsed()) return cmd_verify(suite, json_path);
  if (list->parsed()) return cmd_list();
  return 2;
}
