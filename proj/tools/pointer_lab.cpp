// SPDX-License-Identifier: Apache-2.0
//
// pointer_lab: run declarative decoherence and broadcasting scenarios.
//
//   pointer_lab validate --config scenario.json
//   pointer_lab run      --config scenario.json [--out DIR] [--seed N] [--format json|csv|both]
//   pointer_lab sweep    --config scenario.json [--t-min A] [--t-max B] [--count N] ...
//
// Exit status: 0 when every task succeeded, 1 when some task failed, 2 for
// configuration or usage errors. Diagnostics go to stderr; data goes to files.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pointer_lab/kernels.hpp"
#include "pointer_lab/runner.hpp"

namespace {

using namespace pointer_lab;

struct Options {
  std::string config;
  std::string out = "pointer_lab_out";
  std::optional<std::uint64_t> seed;
  std::string format = "both";
  std::string kernels = "auto";
  std::string t_min = "0";
  std::string t_max = "pi/2";
  std::size_t count = 100;
};

double parse_time(const std::string& s, const char* flag) {
  try {
    return number_from_json(json(s), flag);
  } catch (const Error&) {
    throw Error(std::string(flag) + ": cannot read \"" + s + "\" as a time");
  }
}

int execute(ScenarioConfig cfg, const Options& o) {
  const OutputFormat format = parse_format(o.format);
  std::string out = o.out;
  if (const char* env = std::getenv("POINTER_LAB_OUT"); env && *env) out = env;

  const RunReport report = run_scenario(cfg);
  const auto files = emit_report(report, out, format);

  for (const TaskResult& t : report.tasks) {
    std::cerr << "  " << to_string(t.task) << ": " << (t.ok ? "ok" : "FAILED") << " (" << t.wall_clock_s << " s)";
    if (!t.ok) std::cerr << " " << t.error;
    std::cerr << "\n";
  }
  for (const auto& f : files) std::cerr << "wrote " << f.string() << "\n";
  return report.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preserved observables and redundancy in decoherence scenarios"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--kernels", o.kernels, "numeric kernels: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto add_common = [&](CLI::App* sub, bool running) {
    sub->add_option("--config", o.config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the scenario seed");
    if (running) {
      sub->add_option("--out", o.out, "output directory (POINTER_LAB_OUT takes precedence)");
      sub->add_option("--format", o.format, "json writes only the report; csv and both add plot data")
          ->check(CLI::IsMember({"json", "csv", "both"}));
    }
  };
  CLI::App* validate = app.add_subcommand("validate", "parse and check a scenario file");
  add_common(validate, false);
  CLI::App* run = app.add_subcommand("run", "execute every task of a scenario");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "replace the time grid of a canonical scenario and run it");
  add_common(sweep, true);
  sweep->add_option("--t-min", o.t_min, "first time (accepts expressions like pi/8)");
  sweep->add_option("--t-max", o.t_max, "last time");
  sweep->add_option("--count", o.count, "number of equally spaced times")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (o.kernels != "auto" && !kernels::select_kernels(o.kernels)) {
    std::cerr << "kernels \"" << o.kernels << "\" are not available on this machine\n";
    return 2;
  }

  ScenarioConfig cfg;
  try {
    cfg = parse_scenario(o.config);
    if (o.seed) cfg.seed = *o.seed;
  } catch (const std::exception& e) {
    std::cerr << o.config << ": " << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) {
      std::cerr << o.config << ": ok (" << to_string(cfg.kind) << ", " << cfg.tasks.size() << " tasks)\n";
      return 0;
    }
    if (*sweep) {
      auto* cp = std::get_if<CanonicalParams>(&cfg.params);
      if (!cp) {
        std::cerr << "sweep needs a canonical_decoherence scenario\n";
        return 2;
      }
      cp->times = linspace(parse_time(o.t_min, "--t-min"), parse_time(o.t_max, "--t-max"), o.count);
      if (cfg.tasks.empty()) cfg.tasks = {TaskKind::redundancy, TaskKind::decoherence_factor};
    }
    std::cerr << "running " << cfg.name << " with " << kernels::active_kernels().name << " kernels\n";
    return execute(std::move(cfg), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
