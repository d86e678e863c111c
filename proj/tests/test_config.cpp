// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pointer_lab/runner.hpp"
#include "pointer_lab/scenario_config.hpp"

using namespace pointer_lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pointer_lab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Removes every wall_clock_s field so two runs can be compared.
json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("wall_clock_s");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

}  // namespace

TEST_CASE("canonical defaults") {
  const ScenarioConfig c = parse_scenario_text(R"({"kind": "canonical_decoherence"})", "defaults");
  CHECK(c.name == "defaults");
  CHECK(c.kind == ScenarioKind::canonical_decoherence);
  CHECK(c.tasks.empty());
  const auto& p = std::get<CanonicalParams>(c.params);
  CHECK(p.model.couplings == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(p.model.j.matrix() == pauli::z());
  CHECK(p.model.k.matrix() == pauli::z());
  CHECK(p.target_or_default().outcome_count() == 2);
  CHECK(c.solver.eps_feas == 1e-8);
  CHECK(c.solver.eps_infeas == 1e-6);
}

TEST_CASE("n and g expand to uniform couplings") {
  const ScenarioConfig c =
      parse_scenario_text(R"({"kind": "canonical_decoherence", "params": {"n": 2, "g": 0.5, "times": ["pi/8", 0.1]}})");
  const auto& p = std::get<CanonicalParams>(c.params);
  CHECK(p.model.couplings == std::vector<double>{0.5, 0.5});
  REQUIRE(p.times.size() == 2);
  CHECK(p.times[0] == doctest::Approx(std::numbers::pi / 8));
}

TEST_CASE("pi expressions") {
  CHECK(number_from_json(json("pi"), "x") == doctest::Approx(std::numbers::pi));
  CHECK(number_from_json(json("-pi/4"), "x") == doctest::Approx(-std::numbers::pi / 4));
  CHECK(number_from_json(json("3*pi/8"), "x") == doctest::Approx(3 * std::numbers::pi / 8));
  CHECK(number_from_json(json("0.25 * pi"), "x") == doctest::Approx(std::numbers::pi / 4));
  CHECK(number_from_json(json("1e-3"), "x") == doctest::Approx(1e-3));
  CHECK_THROWS_WITH_AS(number_from_json(json("tau"), "/params/times/0"), doctest::Contains("/params/times/0"), Error);
  CHECK_THROWS_AS(number_from_json(json("pi/0"), "x"), Error);
}

TEST_CASE("invalid environment state names its eigenvalue") {
  const std::string text =
      R"({"kind": "canonical_decoherence", "params": {"n": 1, "env_initial": [[[1.5, 0], [0, -0.5]]]}})";
  CHECK_THROWS_WITH_AS(parse_scenario_text(text), doctest::Contains("min eigenvalue -0.5"), Error);
  CHECK_THROWS_WITH_AS(parse_scenario_text(text), doctest::Contains("/params/env_initial/0"), Error);
}

TEST_CASE("non trace preserving Kraus set names the residual") {
  const std::string text = R"({"kind": "custom_channel", "tasks": ["preservation"],
    "params": {"channel": {"kraus": [[[1, 0], [0, 0.5]]]},
               "observables": [{"elements": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}]}})";
  CHECK_THROWS_WITH_AS(parse_scenario_text(text), doctest::Contains("||sum E^dagger E - 1||_F = 0.75"), Error);
}

TEST_CASE("unknown kind, task and key") {
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"kind": "teleport"})"), doctest::Contains("teleport"), Error);
  CHECK_THROWS_AS(parse_scenario_text(R"({"kind": "cloning_sic", "tasks": ["redundancy"]})"), Error);
  CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"kind": "cloning_sic", "colour": 1})"), doctest::Contains("colour"),
                       Error);
}

TEST_CASE("syntax errors carry the line") {
  const std::string text = "{\n  \"kind\": \"cloning_sic\",\n  \"seed\": ,\n}\n";
  try {
    parse_scenario_text(text);
    FAIL("no exception");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("/nonexistent/pointer_lab.json"), SyntaxError);
}

TEST_CASE("config echo round trips") {
  for (const char* name : {"canonical", "canonical_qutrit", "cloning", "measurement_copy", "custom_dephasing"}) {
    CAPTURE(name);
    const ScenarioConfig c = parse_scenario(fs::path(POINTER_LAB_CONFIG_DIR) / (std::string(name) + ".json"));
    const json echo = config_to_json(c);
    const ScenarioConfig again = scenario_from_json(echo);
    CHECK(config_to_json(again) == echo);
    CHECK(again.name == name);
  }
}

TEST_CASE("runs are deterministic apart from timings") {
  ScenarioConfig c = parse_scenario(fs::path(POINTER_LAB_CONFIG_DIR) / "canonical.json");
  c.seed = 99;
  const json a = strip_timing(report_to_json(run_scenario(c), true));
  const json b = strip_timing(report_to_json(run_scenario(c), true));
  CHECK(a == b);
}

TEST_CASE("report layout") {
  const ScenarioConfig c = parse_scenario(fs::path(POINTER_LAB_CONFIG_DIR) / "cloning.json");
  const RunReport r = run_scenario(c);
  CHECK(r.all_ok());
  const json j = report_to_json(r, false);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["artifact_version"] == kArtifactVersion);
  CHECK(j["config"] == config_to_json(c));
  REQUIRE(j["tasks"].size() == c.tasks.size());
  for (const json& t : j["tasks"]) {
    CHECK(t["status"] == "ok");
    CHECK(t["wall_clock_s"].get<double>() >= 0.0);
  }
}

TEST_CASE("empty task list gives a config-only report") {
  const ScenarioConfig c = parse_scenario_text(R"({"name": "empty", "kind": "measurement_copy"})");
  const RunReport r = run_scenario(c);
  CHECK(r.all_ok());
  CHECK(r.tasks.empty());
  const fs::path dir = scratch_dir("empty");
  const auto files = emit_report(r, dir, OutputFormat::both);
  REQUIRE(files.size() == 1);
  const json j = json::parse(slurp(dir / "empty.report.json"));
  CHECK(j["tasks"].empty());
  CHECK(j["config"]["kind"] == "measurement_copy");
}

TEST_CASE("identity channel preservation echoes the input observable") {
  const std::string text = R"({"kind": "custom_channel", "tasks": ["preservation"],
    "params": {"channel": {"kraus": [[[1, 0], [0, 1]]]},
               "observables": [{"elements": [[[0.7, 0], [0, 0.2]], [[0.3, 0], [0, 0.8]]]}]}})";
  const RunReport r = run_scenario(parse_scenario_text(text));
  REQUIRE(r.all_ok());
  const json& v = r.tasks[0].result["verdicts"][0];
  CHECK(v["status"] == "feasible");
  const auto in = std::get<CustomChannelParams>(r.config.params).observables[0];
  const DiscreteObservable w = observable_from_json(v["witness"], "w");
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(frobenius_distance(w.element(i).matrix(), in.element(i).matrix()) < 1e-8);
}

TEST_CASE("sweep-style run produces the redundancy series") {
  ScenarioConfig c = parse_scenario(fs::path(POINTER_LAB_CONFIG_DIR) / "sweep.json");
  auto& p = std::get<CanonicalParams>(c.params);
  p.times = linspace(0.0, std::numbers::pi / 2, 100);
  c.tasks = {TaskKind::redundancy};
  const RunReport r = run_scenario(c);
  REQUIRE(r.all_ok());
  const fs::path dir = scratch_dir("sweep");
  emit_report(r, dir, OutputFormat::csv);
  const std::string csv = slurp(dir / (c.name + ".redundancy.csv"));
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,decoherence_factor,redundancy");
  std::size_t rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 100);
  CHECK(fs::exists(dir / (c.name + ".report.json")));
}

TEST_CASE("output formats") {
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(parse_format("both") == OutputFormat::both);
  CHECK_THROWS_AS(parse_format("xml"), Error);

  const ScenarioConfig c = parse_scenario(fs::path(POINTER_LAB_CONFIG_DIR) / "canonical.json");
  ScenarioConfig small = c;
  small.tasks = {TaskKind::decoherence_factor};
  const RunReport r = run_scenario(small);
  const fs::path dir = scratch_dir("formats");
  CHECK(emit_report(r, dir, OutputFormat::json).size() == 1);
  CHECK(emit_report(r, dir, OutputFormat::both).size() == 2);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("atomic writes replace the file") {
  const fs::path dir = scratch_dir("atomic");
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  CHECK(slurp(dir / "a.txt") == "second");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  CHECK(n == 1);
}

TEST_CASE("linspace") {
  const auto v = linspace(0.0, 1.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(v[2] == doctest::Approx(0.5));
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
}

TEST_CASE("canonical redundancy goes from 1 to n + 1") {
  const RunReport r = run_scenario(parse_scenario_text(
      R"({"kind": "canonical_decoherence", "tasks": ["redundancy"], "params": {"n": 4, "times": [0, "pi/4"]}})"));
  REQUIRE(r.all_ok());
  const json& pts = r.tasks[0].result["points"];
  CHECK(pts[0]["redundancy"] == 1);
  CHECK(pts[1]["redundancy"] == 5);
}

TEST_CASE("cloning containment task passes and records its margin") {
  const RunReport r = run_scenario(parse_scenario_text(
      R"({"kind": "cloning_sic", "seed": 3, "tasks": ["containment"], "params": {"sample_count": 1000}})"));
  REQUIRE(r.all_ok());
  CHECK(r.tasks[0].result["pass"] == true);
  CHECK(r.tasks[0].result["worst_margin"].get<double>() >= -1e-10);
}
