#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../tools/cli.hpp"
#include "densedisc/artifact.hpp"

using namespace densedisc;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = DENSEDISC_DATA_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "densedisc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("densedisc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

json small_config() {
  return json::parse(R"({
    "m": 1, "epsilon": 0.1, "r": 0.5, "stages": 5,
    "seed_map": {"coords": [[[0, 0]]]},
    "dense_set": {"scheme": "dyadic-grid", "box": [[[-1, 1], [-1, 1]]], "level_cap": 2}
  })");
}

}  // namespace

TEST_CASE("construct, verify, audit and sample") {
  const fs::path dir = scratch("flow");
  write_json(dir / "config.json.in", small_config());
  const fs::path run = dir / "run";
  Result r = cli({"construct", "--config", (dir / "config.json.in").string(), "--out", run.string(), "--stage-maps"});
  CHECK(r.code == 0);
  CHECK(fs::exists(run / "certificates.json"));
  CHECK(fs::exists(run / "stages" / "f_5.map"));

  r = cli({"verify", "--run", run.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("verified") == 0);

  r = cli({"audit", "--run", run.string(), "--probe-step", "0.05"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stages 5\n") != std::string::npos);
  CHECK(r.out.find("nodes_in_disc true") != std::string::npos);

  const fs::path csv = dir / "s.csv";
  r = cli({"sample", "--run", run.string(), "--count", "100", "--radius", "0.5", "--out", csv.string()});
  CHECK(r.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "z_re,z_im,F1_re,F1_im");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 100);

  CHECK(cli({"sample", "--run", run.string(), "--radius", "1", "--out", csv.string()}).code == 2);
  CHECK(cli({"sample", "--run", run.string(), "--radius", "0", "--out", csv.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("the checked-in configuration parses") {
  const fs::path dir = scratch("data");
  const fs::path run = dir / "run";
  json cfg = read_json_file(data_dir + "/acceptance_config.json");
  CHECK(cfg["stages"] == 25);
  cfg["stages"] = 3;
  write_json(dir / "c.json", cfg);
  CHECK(cli({"construct", "--config", (dir / "c.json").string(), "--out", run.string()}).code == 0);
  CHECK(cli({"verify", "--run", run.string()}).code == 0);
  fs::remove_all(dir);
}

TEST_CASE("usage and configuration errors exit with 2") {
  const fs::path dir = scratch("errors");
  CHECK(cli({}).code == 2);
  CHECK(cli({"teleport"}).code == 2);
  CHECK(cli({"construct", "--out", (dir / "x").string()}).code == 2);
  CHECK(cli({"construct", "--config", (dir / "nope.json").string(), "--out", (dir / "x").string()}).code == 2);
  CHECK(cli({"verify", "--run", (dir / "nope").string()}).code == 2);
  CHECK(cli({"audit", "--run", (dir / "nope").string()}).code == 2);

  json bad = small_config();
  bad["epsilon"] = -1;
  write_json(dir / "bad.json", bad);
  const Result r = cli({"construct", "--config", (dir / "bad.json").string(), "--out", (dir / "x").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("epsilon") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"m\": 1,";
  CHECK(cli({"construct", "--config", (dir / "broken.json").string(), "--out", (dir / "x").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("a failing run leaves a partial artifact") {
  const fs::path dir = scratch("partial");
  json cfg = small_config();
  cfg["degree_cap"] = 1;
  write_json(dir / "c.json", cfg);
  const fs::path run = dir / "run";
  const Result r = cli({"construct", "--config", (dir / "c.json").string(), "--out", run.string()});
  CHECK(r.code == 1);
  CHECK(fs::exists(run / "failure.json"));
  CHECK(fs::exists(run / "certificates.json"));
  const json failure = read_json_file(run / "failure.json");
  CHECK(failure.contains("attempts"));
  CHECK(cli({"verify", "--run", run.string()}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("verify detects a perturbed final map") {
  const fs::path dir = scratch("tamper");
  write_json(dir / "c.json", small_config());
  const fs::path run = dir / "run";
  REQUIRE(cli({"construct", "--config", (dir / "c.json").string(), "--out", run.string()}).code == 0);
  json f = read_json_file(run / "final.map");
  f["coords"][0][0][0] = f["coords"][0][0][0].get<double>() + 1e-2;
  write_json(run / "final.map", f);
  const Result r = cli({"verify", "--run", run.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("FAIL") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("random configurations round-trip through construct and verify") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> stages(1, 5), dims(1, 2);
  const fs::path dir = scratch("random");
  for (int t = 0; t < 20; ++t) {
    const int m = dims(rng);
    json coords = json::array(), box = json::array();
    for (int i = 0; i < m; ++i) {
      json c = json::array();
      const int deg = int(u(rng) * 4);
      for (int k = 0; k <= deg; ++k) c.push_back({0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5)});
      coords.push_back(c);
      const double x = 2 * u(rng) - 1, y = 2 * u(rng) - 1, w = 0.1 + u(rng);
      box.push_back({{x, x + w}, {y, y + w}});
    }
    json cfg = {{"m", m},
                {"epsilon", 0.05 + 0.35 * u(rng)},
                {"r", 0.2 + 0.6 * u(rng)},
                {"stages", stages(rng)},
                {"seed_map", {{"coords", coords}}},
                {"dense_set", {{"scheme", "dyadic-grid"}, {"box", box}}}};
    const fs::path c = dir / ("c" + std::to_string(t) + ".json");
    const fs::path run = dir / ("run" + std::to_string(t));
    write_json(c, cfg);
    const Result rc = cli({"construct", "--config", c.string(), "--out", run.string(), "--stage-maps"});
    INFO(cfg.dump(), rc.err);
    CHECK(rc.code == 0);
    const Result rv = cli({"verify", "--run", run.string()});
    INFO(rv.err);
    CHECK(rv.code == 0);
  }
  fs::remove_all(dir);
}
