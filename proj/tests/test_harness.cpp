#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fgopt/acceptance.hpp"
#include "fgopt/harness.hpp"

using namespace fgopt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("fgopt_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run writes the documented CSV schema and a sidecar") {
  TempDir dir("schema");
  ExperimentSpec spec{"fw_quadratic_ball", {{"T", 50}}, 42, dir.path.string()};
  auto files = run_experiment(spec);
  REQUIRE(files.size() == 2);

  const std::string csv = slurp(files[0]);
  REQUIRE(csv.rfind("t,f_value,gap\n", 0) == 0);
  // 51 lines: header + 50 rows
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 51);

  const json meta = json::parse(slurp(files[1]));
  REQUIRE(meta["experiment"] == "fw_quadratic_ball");
  REQUIRE(meta["seed"] == 42);
  REQUIRE(meta["version"] == std::string(kVersion));
  REQUIRE(meta.contains("config_digest"));
  REQUIRE(meta["params"]["T"] == 50);
}

TEST_CASE("identical spec and seed produce identical bytes") {
  TempDir a("det_a"), b("det_b");
  ExperimentSpec sa{"fw_quadratic_ball", {{"T", 120}}, 7, a.path.string()};
  ExperimentSpec sb{"fw_quadratic_ball", {{"T", 120}}, 7, b.path.string()};
  auto fa = run_experiment(sa);
  auto fb = run_experiment(sb);
  REQUIRE(slurp(fa[0]) == slurp(fb[0]));

  // and a different seed changes the digest but not the schema
  ExperimentSpec sc{"fw_quadratic_ball", {{"T", 120}}, 8, a.path.string()};
  REQUIRE(config_digest(sa) != config_digest(sc));
}

TEST_CASE("unknown names and parameters are rejected with guidance") {
  TempDir dir("bad");
  ExperimentSpec unknown{"does_not_exist", {}, 0, dir.path.string()};
  REQUIRE_THROWS_WITH(run_experiment(unknown), Catch::Matchers::ContainsSubstring("known experiments"));

  ExperimentSpec badparam{"fw_quadratic_ball", {{"bogus", 1}}, 0, dir.path.string()};
  REQUIRE_THROWS_WITH(run_experiment(badparam), Catch::Matchers::ContainsSubstring("no parameter"));

  REQUIRE_THROWS_AS(run_acceptance_suite("nope"), std::invalid_argument);
}

TEST_CASE("sweep experiments emit one file per variant plus a summary") {
  TempDir dir("sweep");
  ExperimentSpec spec{"saddle_beta_sweep",
                      {{"T", 2000}, {"betas", {0.0, 0.9}}, {"stride", 500}},
                      3,
                      dir.path.string()};
  auto files = run_experiment(spec);
  // two beta traces + summary + sidecar
  REQUIRE(files.size() == 4);
  bool has_summary = false;
  for (const auto& f : files) has_summary |= f.find("summary") != std::string::npos;
  REQUIRE(has_summary);
}

TEST_CASE("experiment registry names are unique and runnable metadata") {
  std::set<std::string> names;
  for (const auto& def : experiment_registry()) {
    REQUIRE(names.insert(def.name).second);
    REQUIRE(!def.description.empty());
  }
  REQUIRE(names.count("fw_quadratic_ball") == 1);
  REQUIRE(names.count("nuclear_completion") == 1);
}
