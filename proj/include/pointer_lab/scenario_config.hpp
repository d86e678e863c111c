// SPDX-License-Identifier: Apache-2.0
//
// Declarative scenario files. A scenario is a JSON document:
//
//   {
//     "name": "canonical",                 // optional, defaults to the file stem
//     "kind": "canonical_decoherence",     // or cloning_sic, measurement_copy, custom_channel
//     "seed": 7,                           // optional, default 0
//     "solver": { "eps_feas": 1e-8, "eps_infeas": 1e-6, "max_iter": 50000, "record_trace": false },
//     "tasks": ["redundancy", "decoherence_factor"],
//     "params": { ... kind specific ... }
//   }
//
// Matrices use the shared [re, im] encoding, and scalar parameters accept
// expressions such as "pi/4".

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pointer_lab/json_io.hpp"
#include "pointer_lab/scenarios.hpp"

namespace pointer_lab {

enum class ScenarioKind { canonical_decoherence, cloning_sic, measurement_copy, custom_channel };

enum class TaskKind {
  redundancy,
  decoherence_factor,
  joint_pointer,
  correlation,
  preservation,
  containment,
  coarse_graining,
  correctability,
};

std::string to_string(ScenarioKind k);
std::string to_string(TaskKind t);

// params: J, couplings (or n and g), K, env_initial, times, target,
// correlation_states, random_observables
struct CanonicalParams {
  CanonicalModelSpec model;  // model.t is unused; see times
  std::vector<double> times = {0.0, std::numbers::pi / 4.0};
  std::optional<DiscreteObservable> target;  // default: spectral measure of J
  std::size_t correlation_states = 20;
  std::size_t random_observables = 10;

  DiscreteObservable target_or_default() const;
};

// params: orientation, sample_count, instance_count
struct CloningParams {
  std::array<double, 3> orientation = {0.0, 0.0, 1.0};
  std::size_t sample_count = 1000;
  std::size_t instance_count = 100;
};

// params: gamma, n, correlation_states
struct MeasurementCopyParams {
  DiscreteObservable gamma = computational_basis_measurement(2);
  std::size_t n = 3;
  std::size_t correlation_states = 20;
};

// params: channel or model, observables, gamma
struct CustomChannelParams {
  std::optional<QuantumChannel> channel;
  std::optional<BroadcastModel> model;
  std::vector<DiscreteObservable> observables;
  std::optional<DiscreteObservable> gamma;

  const QuantumChannel& joint() const { return model ? model->joint() : *channel; }
};

using ScenarioParams =
    std::variant<CanonicalParams, CloningParams, MeasurementCopyParams, CustomChannelParams>;

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::canonical_decoherence;
  std::uint64_t seed = 0;
  SolverOptions solver;
  std::vector<TaskKind> tasks;
  ScenarioParams params;
};

// Raised for unreadable files and JSON syntax errors; carries the 1-based line.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

ScenarioConfig parse_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& default_name = "scenario");
ScenarioConfig scenario_from_json(const json& j, const std::string& default_name = "scenario");

// Fully explicit echo; scenario_from_json(config_to_json(c)) reproduces c.
json config_to_json(const ScenarioConfig& c);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace pointer_lab
