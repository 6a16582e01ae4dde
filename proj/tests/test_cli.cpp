// End-to-end runs of the command-line tool. BAYESMAP_CLI and BAYESMAP_CONFIGS
// are set by the build.
#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bayesmap/io.hpp"

namespace fs = std::filesystem;
using bayesmap::io::json;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("bayesmap_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(BAYESMAP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return (fs::path(BAYESMAP_CONFIGS) / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::string write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("map on the counterexample", "[cli]") {
  const auto out = scratch("map");
  REQUIRE(run("map --config " + config("counterexample.json") + " --out " + out.string()) == 0);
  const json j = load(out / "map.json");
  CHECK(j["result"]["canonical"].get<double>() == 0.0);
  CHECK(j["result"]["sup_value"].get<double>() == 1.0);
}

TEST_CASE("sweep and counterexample suites", "[cli]") {
  const auto out = scratch("suite");
  REQUIRE(run("sweep --config " + config("counterexample.json") + " --out " + (out / "sweep").string()) == 0);
  CHECK(load(out / "sweep" / "verdict.json")["verdict"] == "diverges_from_MAP");
  CHECK(fs::exists(out / "sweep" / "sweep.csv"));

  REQUIRE(run("counterexample --out " + (out / "ce").string()) == 0);
  const json v = load(out / "ce" / "verdict.json");
  CHECK(v["verdict"] == "diverges_from_MAP");
  CHECK(v["map_is_origin"] == true);
  CHECK(v["all_bayes_outside_center"] == true);
  CHECK(v["plateau_dominates_origin"] == true);
  CHECK(v["continuity"]["discontinuous"] == 0);
  const std::string dom = slurp(out / "ce" / "domination.csv");
  CHECK(std::count(dom.begin(), dom.end(), '\n') == 5);
  CHECK(fs::exists(out / "ce" / "counterexample_density.json"));

  const auto one = write_config(out, R"({"nu_max": 1})");
  REQUIRE(run("counterexample --config " + one + " --out " + (out / "one").string()) == 0);
  const std::string d1 = slurp(out / "one" / "domination.csv");
  CHECK(d1.find("\n1,0.16666666666666669,0.17578125,") != std::string::npos);
}

TEST_CASE("check and hypo outputs", "[cli]") {
  const auto out = scratch("check");
  REQUIRE(run("check --config " + config("counterexample.json") + " --out " + (out / "ce").string()) == 0);
  CHECK(load(out / "ce" / "conditions.json")["level_set_condition"] == false);
  REQUIRE(run("check --config " + config("triangle.json") + " --out " + (out / "tri").string()) == 0);
  const json t = load(out / "tri" / "conditions.json");
  CHECK(t["level_set_condition"] == true);
  CHECK(t["quasiconcave"]["holds"] == true);
  CHECK(t["log_concave"]["holds"] == true);
  REQUIRE(run("check --config " + config("ramp.json") + " --out " + (out / "ramp").string()) == 0);
  CHECK(load(out / "ramp" / "conditions.json")["log_concave"]["holds"] == true);

  REQUIRE(run("hypo --config " + config("triangle.json") + " --out " + (out / "hypo").string()) == 0);
  CHECK(load(out / "hypo" / "hypo.json")["any_violation"] == false);
  REQUIRE(run("bayes --config " + config("grid2d.json") + " --out " + (out / "grid").string()) == 0);
  CHECK(load(out / "grid" / "bayes.json")["result"]["canonical"].size() == 2);
}

TEST_CASE("dump writes a sampling", "[cli]") {
  const auto out = scratch("dump");
  REQUIRE(run("counterexample dump --max-bump 3 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "counterexample_samples.csv");
  CHECK(csv.rfind("theta,value\n-1,0\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5002);
  CHECK(csv.find("\n0,1\n") != std::string::npos);
}

TEST_CASE("exit codes", "[cli]") {
  const auto out = scratch("codes");
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("map") == 2);
  CHECK(run("map --config " + (out / "absent.json").string()) == 2);
  CHECK(run("map --config " + write_config(out, "{ not json") + " --out " + out.string()) == 2);
  CHECK(run("map --config " + write_config(out, R"({"density": {"counterexample": true}, "colour": 1})")) == 2);
  CHECK(run("map --config " + write_config(out, R"({"search_box": [0, 1]})") + " --out " + out.string()) == 2);
  CHECK(run("sweep --config " + write_config(out, R"({"density": {"counterexample": true}, "ladder": [8, 4]})") +
            " --out " + out.string()) == 2);
  CHECK(run("hypo --config " + config("grid2d.json") + " --out " + out.string()) == 2);
  // Too few bumps for the requested ladder.
  CHECK(run("counterexample --config " +
            write_config(out, R"({"density": {"counterexample": {"max_bump": 4}}, "nu_max": 3})") + " --out " +
            out.string()) == 3);
  CHECK(run("counterexample dump --max-bump 0") == 2);
}

TEST_CASE("same config and seed give identical bytes", "[cli][property]") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run("counterexample --config " + config("counterexample.json") + " --seed 3 --out " + dir.string()) == 0);
    REQUIRE(run("check --config " + config("counterexample.json") + " --seed 3 --out " + dir.string()) == 0);
    REQUIRE(run("sweep --config " + config("skewed.json") + " --seed 3 --out " + (dir / "s").string()) == 0);
  }
  for (const char* f : {"domination.csv", "sweep.csv", "verdict.json", "counterexample_density.json",
                        "conditions.json", "s/sweep.csv", "s/verdict.json"}) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
}
