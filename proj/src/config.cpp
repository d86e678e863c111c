// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/scenario_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace pointer_lab {

namespace {

struct KindName {
  ScenarioKind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {ScenarioKind::canonical_decoherence, "canonical_decoherence"},
    {ScenarioKind::cloning_sic, "cloning_sic"},
    {ScenarioKind::measurement_copy, "measurement_copy"},
    {ScenarioKind::custom_channel, "custom_channel"},
};

struct TaskName {
  TaskKind task;
  const char* name;
};
constexpr TaskName kTasks[] = {
    {TaskKind::redundancy, "redundancy"},
    {TaskKind::decoherence_factor, "decoherence_factor"},
    {TaskKind::joint_pointer, "joint_pointer"},
    {TaskKind::correlation, "correlation"},
    {TaskKind::preservation, "preservation"},
    {TaskKind::containment, "containment"},
    {TaskKind::coarse_graining, "coarse_graining"},
    {TaskKind::correctability, "correctability"},
};

std::vector<TaskKind> supported_tasks(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::canonical_decoherence:
      return {TaskKind::redundancy, TaskKind::decoherence_factor, TaskKind::joint_pointer,
              TaskKind::correlation, TaskKind::coarse_graining};
    case ScenarioKind::cloning_sic:
      return {TaskKind::preservation, TaskKind::containment, TaskKind::coarse_graining};
    case ScenarioKind::measurement_copy:
      return {TaskKind::redundancy, TaskKind::joint_pointer, TaskKind::correlation};
    case ScenarioKind::custom_channel:
      return {TaskKind::preservation, TaskKind::correctability, TaskKind::coarse_graining,
              TaskKind::redundancy};
  }
  return {};
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw FieldError(path.empty() ? "/" : path, "expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return item.key() == a; });
    if (!known) throw FieldError(path + "/" + item.key(), "unknown field");
  }
}

std::size_t count_field(const json& j, const char* key, std::size_t fallback, const std::string& path,
                        std::size_t min_value = 0) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  const std::string p = path + "/" + key;
  if (!v.is_number_integer() || v.get<long long>() < 0) throw FieldError(p, "expected a nonnegative integer");
  const auto n = v.get<std::size_t>();
  if (n < min_value) throw FieldError(p, "must be at least " + std::to_string(min_value));
  return n;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw FieldError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<DiscreteObservable> observable_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw FieldError(path, "expected an array of observables");
  std::vector<DiscreteObservable> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(observable_from_json(j[i], path + "/" + std::to_string(i)));
  return out;
}

CanonicalParams parse_canonical(const json& j, const std::string& path) {
  check_keys(j, path,
             {"J", "couplings", "n", "g", "K", "env_initial", "times", "target", "correlation_states",
              "random_observables"});
  CanonicalParams p;
  if (j.contains("J")) p.model.j = hermitian_from_json(j["J"], path + "/J");
  if (j.contains("K")) p.model.k = hermitian_from_json(j["K"], path + "/K");

  if (j.contains("couplings")) {
    if (j.contains("g")) throw FieldError(path + "/g", "give either couplings or g, not both");
    p.model.couplings = number_list(j["couplings"], path + "/couplings");
    if (p.model.couplings.empty()) throw FieldError(path + "/couplings", "need at least one coupling");
    if (j.contains("n") && count_field(j, "n", 0, path) != p.model.couplings.size()) {
      throw FieldError(path + "/n", "does not match the number of couplings");
    }
  } else {
    const std::size_t n = count_field(j, "n", 4, path, 1);
    const double g = j.contains("g") ? number_from_json(j["g"], path + "/g") : 1.0;
    p.model.couplings.assign(n, g);
  }

  if (j.contains("env_initial")) {
    const json& ej = j["env_initial"];
    if (!ej.is_array()) throw FieldError(path + "/env_initial", "expected an array of density matrices");
    for (std::size_t i = 0; i < ej.size(); ++i) {
      p.model.env_initial.push_back(density_from_json(ej[i], path + "/env_initial/" + std::to_string(i)));
    }
  }
  try {
    p.model.validate();
  } catch (const Error& e) {
    throw FieldError(path, e.what());
  }

  if (j.contains("times")) {
    p.times = number_list(j["times"], path + "/times");
  }
  if (j.contains("target")) {
    p.target = observable_from_json(j["target"], path + "/target");
    if (p.target->dim() != p.model.j.dim()) {
      throw FieldError(path + "/target", "observable does not act on the system");
    }
  }
  p.correlation_states = count_field(j, "correlation_states", p.correlation_states, path);
  p.random_observables = count_field(j, "random_observables", p.random_observables, path);
  return p;
}

CloningParams parse_cloning(const json& j, const std::string& path) {
  check_keys(j, path, {"orientation", "sample_count", "instance_count"});
  CloningParams p;
  if (j.contains("orientation")) {
    const std::vector<double> v = number_list(j["orientation"], path + "/orientation");
    if (v.size() != 3) throw FieldError(path + "/orientation", "expected three components");
    p.orientation = {v[0], v[1], v[2]};
    try {
      (void)tetrahedron(p.orientation);
    } catch (const Error& e) {
      throw FieldError(path + "/orientation", e.what());
    }
  }
  p.sample_count = count_field(j, "sample_count", p.sample_count, path);
  p.instance_count = count_field(j, "instance_count", p.instance_count, path);
  return p;
}

MeasurementCopyParams parse_measurement_copy(const json& j, const std::string& path) {
  check_keys(j, path, {"gamma", "n", "correlation_states"});
  MeasurementCopyParams p;
  if (j.contains("gamma")) p.gamma = observable_from_json(j["gamma"], path + "/gamma");
  p.n = count_field(j, "n", p.n, path, 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < p.n; ++i) {
    total *= p.gamma.outcome_count();
    if (total > kMaxJointOutcomes) throw FieldError(path + "/n", "outcome_count^n exceeds 10^6");
  }
  p.correlation_states = count_field(j, "correlation_states", p.correlation_states, path);
  return p;
}

CustomChannelParams parse_custom(const json& j, const std::string& path) {
  check_keys(j, path, {"channel", "model", "observables", "gamma"});
  CustomChannelParams p;
  if (j.contains("channel") == j.contains("model")) {
    throw FieldError(path, "give exactly one of channel or model");
  }
  if (j.contains("channel")) p.channel = channel_from_json(j["channel"], path + "/channel");
  if (j.contains("model")) p.model = model_from_json(j["model"], path + "/model");
  if (j.contains("observables")) p.observables = observable_list(j["observables"], path + "/observables");
  const std::size_t din = p.joint().dim_in();
  for (std::size_t i = 0; i < p.observables.size(); ++i) {
    if (p.observables[i].dim() != din) {
      throw FieldError(path + "/observables/" + std::to_string(i), "observable does not act on the channel input");
    }
  }
  if (j.contains("gamma")) {
    p.gamma = observable_from_json(j["gamma"], path + "/gamma");
    if (p.gamma->dim() != din) throw FieldError(path + "/gamma", "observable does not act on the channel input");
  }
  return p;
}

SolverOptions parse_solver(const json& j, const std::string& path) {
  check_keys(j, path, {"eps_feas", "eps_infeas", "max_iter", "record_trace"});
  SolverOptions o;
  if (j.contains("eps_feas")) o.eps_feas = number_from_json(j["eps_feas"], path + "/eps_feas");
  if (j.contains("eps_infeas")) o.eps_infeas = number_from_json(j["eps_infeas"], path + "/eps_infeas");
  if (j.contains("max_iter")) {
    const json& m = j["max_iter"];
    if (!m.is_number_integer() || m.get<long long>() < 1 || m.get<long long>() > 100'000'000) {
      throw FieldError(path + "/max_iter", "expected an integer in [1, 1e8]");
    }
    o.max_iter = m.get<int>();
  }
  if (j.contains("record_trace")) {
    if (!j["record_trace"].is_boolean()) throw FieldError(path + "/record_trace", "expected true or false");
    o.record_trace = j["record_trace"].get<bool>();
  }
  try {
    o.validate();
  } catch (const Error& e) {
    throw FieldError(path, e.what());
  }
  return o;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

}  // namespace

std::string to_string(ScenarioKind k) {
  for (const KindName& kn : kKinds)
    if (kn.kind == k) return kn.name;
  return "unknown";
}

std::string to_string(TaskKind t) {
  for (const TaskName& tn : kTasks)
    if (tn.task == t) return tn.name;
  return "unknown";
}

DiscreteObservable CanonicalParams::target_or_default() const {
  return target ? *target : spectral_measure(model.j);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

ScenarioConfig scenario_from_json(const json& j, const std::string& default_name) {
  check_keys(j, "", {"name", "kind", "seed", "solver", "tasks", "params"});
  ScenarioConfig c;
  c.name = default_name;
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) {
      throw FieldError("/name", "expected a nonempty string");
    }
    c.name = j["name"].get<std::string>();
    if (c.name.find_first_of("/\\") != std::string::npos) {
      throw FieldError("/name", "must not contain path separators");
    }
  }

  if (!j.contains("kind")) throw FieldError("/kind", "missing required field");
  if (!j["kind"].is_string()) throw FieldError("/kind", "expected a string");
  const std::string kind = j["kind"].get<std::string>();
  const auto kit = std::find_if(std::begin(kKinds), std::end(kKinds),
                                [&](const KindName& kn) { return kind == kn.name; });
  if (kit == std::end(kKinds)) {
    throw FieldError("/kind", "unknown kind \"" + kind +
                                  "\" (expected canonical_decoherence, cloning_sic, measurement_copy "
                                  "or custom_channel)");
  }
  c.kind = kit->kind;

  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw FieldError("/seed", "expected a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("solver")) c.solver = parse_solver(j["solver"], "/solver");

  const json empty = json::object();
  const json& pj = j.contains("params") ? j["params"] : empty;
  switch (c.kind) {
    case ScenarioKind::canonical_decoherence:
      c.params = parse_canonical(pj, "/params");
      break;
    case ScenarioKind::cloning_sic:
      c.params = parse_cloning(pj, "/params");
      break;
    case ScenarioKind::measurement_copy:
      c.params = parse_measurement_copy(pj, "/params");
      break;
    case ScenarioKind::custom_channel:
      if (!j.contains("params")) throw FieldError("/params", "custom_channel needs a channel or model");
      c.params = parse_custom(pj, "/params");
      break;
  }

  if (j.contains("tasks")) {
    const json& tj = j["tasks"];
    if (!tj.is_array()) throw FieldError("/tasks", "expected an array of task names");
    const std::vector<TaskKind> ok = supported_tasks(c.kind);
    for (std::size_t i = 0; i < tj.size(); ++i) {
      const std::string p = "/tasks/" + std::to_string(i);
      if (!tj[i].is_string()) throw FieldError(p, "expected a task name");
      const std::string name = tj[i].get<std::string>();
      const auto tit = std::find_if(std::begin(kTasks), std::end(kTasks),
                                    [&](const TaskName& tn) { return name == tn.name; });
      if (tit == std::end(kTasks)) throw FieldError(p, "unknown task \"" + name + "\"");
      if (std::find(ok.begin(), ok.end(), tit->task) == ok.end()) {
        throw FieldError(p, "task \"" + name + "\" is not available for kind " + kind);
      }
      if (c.kind == ScenarioKind::custom_channel) {
        const auto& cp = std::get<CustomChannelParams>(c.params);
        if (tit->task == TaskKind::redundancy && !cp.model) {
          throw FieldError(p, "redundancy needs params.model");
        }
        if (tit->task == TaskKind::coarse_graining && !cp.gamma) {
          throw FieldError(p, "coarse_graining needs params.gamma");
        }
      }
      c.tasks.push_back(tit->task);
    }
  }
  return c;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& default_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SyntaxError("syntax error at line " + std::to_string(line) + ": " + e.what(), line);
  }
  return scenario_from_json(j, default_name);
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SyntaxError("cannot read " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path.stem().string());
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["seed"] = c.seed;
  j["solver"] = {{"eps_feas", c.solver.eps_feas},
                 {"eps_infeas", c.solver.eps_infeas},
                 {"max_iter", c.solver.max_iter},
                 {"record_trace", c.solver.record_trace}};
  json tasks = json::array();
  for (TaskKind t : c.tasks) tasks.push_back(to_string(t));
  j["tasks"] = std::move(tasks);

  json p = json::object();
  if (const auto* cp = std::get_if<CanonicalParams>(&c.params)) {
    p["J"] = matrix_to_json(cp->model.j.matrix());
    p["K"] = matrix_to_json(cp->model.k.matrix());
    p["couplings"] = cp->model.couplings;
    json env = json::array();
    for (const DensityMatrix& d : cp->model.env_initial) env.push_back(matrix_to_json(d.matrix()));
    p["env_initial"] = std::move(env);
    p["times"] = cp->times;
    if (cp->target) p["target"] = observable_to_json(*cp->target);
    p["correlation_states"] = cp->correlation_states;
    p["random_observables"] = cp->random_observables;
  } else if (const auto* lp = std::get_if<CloningParams>(&c.params)) {
    p["orientation"] = lp->orientation;
    p["sample_count"] = lp->sample_count;
    p["instance_count"] = lp->instance_count;
  } else if (const auto* mp = std::get_if<MeasurementCopyParams>(&c.params)) {
    p["gamma"] = observable_to_json(mp->gamma);
    p["n"] = mp->n;
    p["correlation_states"] = mp->correlation_states;
  } else if (const auto* up = std::get_if<CustomChannelParams>(&c.params)) {
    if (up->model) p["model"] = model_to_json(*up->model);
    if (up->channel) p["channel"] = channel_to_json(*up->channel);
    json obs = json::array();
    for (const DiscreteObservable& x : up->observables) obs.push_back(observable_to_json(x));
    p["observables"] = std::move(obs);
    if (up->gamma) p["gamma"] = observable_to_json(*up->gamma);
  }
  j["params"] = std::move(p);
  return j;
}

}  // namespace pointer_lab
