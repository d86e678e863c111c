// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pointer_lab/random.hpp"

namespace pointer_lab {

namespace {

struct TaskContext {
  const ScenarioConfig& config;
  std::vector<CsvSeries>& series;
  SplitMix64 rng;
  std::string check_failure;  // a checked property did not hold
};

void add_trace(TaskContext& ctx, const std::string& task, const PreservationVerdict& v) {
  if (v.trace.empty()) return;
  CsvSeries s;
  std::size_t idx = 0;
  for (const CsvSeries& other : ctx.series)
    if (other.stem.rfind(task + ".trace-", 0) == 0) ++idx;
  s.stem = task + ".trace-" + std::to_string(idx);
  s.description = "best residual per solver iteration";
  s.columns = {"iteration", "residual"};
  for (std::size_t i = 0; i < v.trace.size(); ++i) s.rows.push_back({static_cast<double>(i + 1), v.trace[i]});
  ctx.series.push_back(std::move(s));
}

json fragments_json(const RedundancyReport& rep) {
  json arr = json::array();
  for (const FragmentVerdict& f : rep.fragments) {
    json v = verdict_to_json(f.verdict);
    v["fragment"] = f.label;
    arr.push_back(std::move(v));
  }
  return arr;
}

std::vector<DiscreteObservable> witnesses_of(const IntersectionResult& ir) {
  std::vector<DiscreteObservable> w;
  for (const PreservationVerdict& v : ir.verdicts) w.push_back(*v.witness);
  return w;
}

DiscreteObservable random_coarse_graining(SplitMix64& rng, const DiscreteObservable& gamma, std::size_t outcomes) {
  std::vector<double> p(gamma.outcome_count() * outcomes);
  for (std::size_t i = 0; i < gamma.outcome_count(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < outcomes; ++k) sum += (p[i * outcomes + k] = rng.uniform());
    for (std::size_t k = 0; k < outcomes; ++k) p[i * outcomes + k] /= sum;
  }
  return coarse_grain(gamma, StochasticMatrix(gamma.outcome_count(), outcomes, std::move(p), 1e-9));
}

// Joint pointer observable for one model, when x is preserved by every fragment.
json joint_pointer_point(const BroadcastModel& model, const DiscreteObservable& x, const SolverOptions& opts,
                         double& worst) {
  const std::vector<QuantumChannel> channels = all_marginals(model);
  const IntersectionResult ir = in_intersection(x, channels, opts);
  json point = {{"in_intersection", ir.in_intersection}, {"feasible_fragments", ir.feasible_count}};
  if (!ir.in_intersection) return point;

  const std::vector<DiscreteObservable> w = witnesses_of(ir);
  const DiscreteObservable gamma = joint_pointer_observable(w, model);
  const std::vector<double> consistency = marginal_consistency_residuals(gamma, w, model);
  std::vector<double> classical;
  for (std::size_t f = 0; f < w.size(); ++f) {
    const CoarseGrainingResult cg =
        coarse_graining_witness(pullback(w[f], channels[f]), gamma, opts.eps_feas, opts.max_iter);
    classical.push_back(cg.residual);
    worst = std::max(worst, cg.residual);
  }
  for (double c : consistency) worst = std::max(worst, c);
  point["joint_outcomes"] = gamma.outcome_count();
  point["marginal_consistency_residuals"] = consistency;
  point["coarse_graining_residuals"] = classical;
  return point;
}

// Largest off-diagonal entry over all fragment pairs and sampled states.
double max_off_diagonal(const BroadcastModel& model, const std::vector<DiscreteObservable>& readouts,
                        std::size_t states, SplitMix64& rng) {
  double worst = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    const DensityMatrix rho = random_density_matrix(rng, model.dim_in());
    for (std::size_t i = 0; i < readouts.size(); ++i)
      for (std::size_t j = i + 1; j < readouts.size(); ++j) {
        const auto c = correlation_matrix(model, i, j, readouts[i], readouts[j], rho);
        for (std::size_t a = 0; a < c.size(); ++a)
          for (std::size_t b = 0; b < c[a].size(); ++b)
            if (a != b) worst = std::max(worst, std::abs(c[a][b]));
      }
  }
  return worst;
}

json canonical_task(TaskKind task, TaskContext& ctx, const CanonicalParams& p) {
  const SolverOptions& opts = ctx.config.solver;
  const DiscreteObservable target = p.target_or_default();
  json points = json::array();

  switch (task) {
    case TaskKind::redundancy: {
      CsvSeries s{"redundancy", "redundancy of the target observable over time", {"t", "decoherence_factor", "redundancy"}, {}};
      for (double t : p.times) {
        CanonicalModelSpec spec = p.model;
        spec.t = t;
        const double factor = decoherence_factor(spec);
        const RedundancyReport rep = redundancy_report(canonical_model(spec), target, opts, factor, t);
        for (const FragmentVerdict& f : rep.fragments) add_trace(ctx, "redundancy", f.verdict);
        points.push_back({{"t", t}, {"decoherence_factor", factor}, {"redundancy", rep.redundancy},
                          {"fragments", fragments_json(rep)}});
        s.rows.push_back({t, factor, static_cast<double>(rep.redundancy)});
      }
      ctx.series.push_back(std::move(s));
      return {{"target", observable_to_json(target)}, {"points", std::move(points)}};
    }
    case TaskKind::decoherence_factor: {
      CsvSeries s{"decoherence_factor", "simulated and product-form decoherence factor",
                  {"t", "simulated", "product_form"}, {}};
      double dev = 0.0;
      for (double t : p.times) {
        CanonicalModelSpec spec = p.model;
        spec.t = t;
        const double sim = decoherence_factor(spec);
        const double prod = decoherence_factor_product(spec);
        dev = std::max(dev, std::abs(sim - prod));
        points.push_back({{"t", t}, {"simulated", sim}, {"product_form", prod}});
        s.rows.push_back({t, sim, prod});
      }
      ctx.series.push_back(std::move(s));
      return {{"points", std::move(points)}, {"max_abs_deviation", dev}};
    }
    case TaskKind::joint_pointer: {
      double worst = 0.0;
      for (double t : p.times) {
        CanonicalModelSpec spec = p.model;
        spec.t = t;
        json point = joint_pointer_point(canonical_model(spec), target, opts, worst);
        point["t"] = t;
        points.push_back(std::move(point));
      }
      return {{"points", std::move(points)}, {"worst_residual", worst}};
    }
    case TaskKind::correlation: {
      double worst = 0.0;
      for (double t : p.times) {
        CanonicalModelSpec spec = p.model;
        spec.t = t;
        const BroadcastModel model = canonical_model(spec);
        const IntersectionResult ir = in_intersection(target, all_marginals(model), opts);
        json point = {{"t", t}, {"in_intersection", ir.in_intersection}};
        if (ir.in_intersection) {
          const double off = max_off_diagonal(model, witnesses_of(ir), p.correlation_states, ctx.rng);
          worst = std::max(worst, off);
          point["max_off_diagonal"] = off;
        }
        points.push_back(std::move(point));
      }
      return {{"points", std::move(points)}, {"max_off_diagonal", worst}, {"states", p.correlation_states}};
    }
    case TaskKind::coarse_graining: {
      // Every observable preserved by all fragments must coarse-grain the spectral measure of J.
      const DiscreteObservable pj = spectral_measure(p.model.j);
      std::vector<DiscreteObservable> candidates{target};
      for (std::size_t r = 0; r < p.random_observables; ++r) {
        candidates.push_back(r % 2 == 0 ? random_coarse_graining(ctx.rng, pj, 2)
                                        : random_povm(ctx.rng, p.model.j.dim(), 2));
      }
      double worst = 0.0;
      std::size_t in_count = 0;
      for (double t : p.times) {
        CanonicalModelSpec spec = p.model;
        spec.t = t;
        const std::vector<QuantumChannel> channels = all_marginals(canonical_model(spec));
        std::size_t here = 0;
        for (const DiscreteObservable& x : candidates) {
          if (!in_intersection(x, channels, opts).in_intersection) continue;
          ++here;
          const CoarseGrainingResult cg = coarse_graining_witness(x, pj, opts.eps_feas, opts.max_iter);
          worst = std::max(worst, cg.residual);
        }
        in_count += here;
        points.push_back({{"t", t}, {"candidates", candidates.size()}, {"in_intersection", here}});
      }
      json r = {{"points", std::move(points)}, {"worst_residual", worst}, {"checked", in_count}};
      if (worst > opts.eps_feas) {
        ctx.check_failure = "an observable preserved by every fragment is not a coarse-graining of J (residual " +
                          format_number(worst) + ")";
      }
      return r;
    }
    default:
      break;
  }
  throw Error("task not available for canonical_decoherence");
}

json cloning_task(TaskKind task, TaskContext& ctx, const CloningParams& p) {
  const SolverOptions& opts = ctx.config.solver;
  const QuantumChannel n = cloning_channel();
  const DiscreteObservable sic = sic_povm(p.orientation);

  switch (task) {
    case TaskKind::preservation: {
      const PreservationVerdict v = preservation_witness(sic, n, opts);
      add_trace(ctx, "preservation", v);
      // The unique solution of the equality constraints is Y_i = 3 Gamma_i - 1/2.
      double dist = 0.0;
      double lmin = 0.0;
      for (std::size_t i = 0; i < v.affine_iterate.size(); ++i) {
        ComplexMatrix y = sic.element(i).matrix() * cplx{3.0};
        y -= ComplexMatrix::identity(2) * cplx{0.5};
        dist = std::max(dist, frobenius_distance(v.affine_iterate[i].matrix(), y));
        lmin = std::min(lmin, min_eigenvalue(HermitianOperator(y)));
      }
      return {{"verdict", verdict_to_json(v)},
              {"obstruction", {{"max_distance_to_affine_iterate", dist}, {"min_eigenvalue", lmin}}}};
    }
    case TaskKind::containment: {
      const ContainmentReport rep = containment_check(n, sic, p.sample_count, ctx.config.seed);
      json r = {{"pass", rep.pass},
                {"samples", rep.samples},
                {"worst_margin", rep.worst_margin},
                {"worst_sample", rep.worst_sample},
                {"worst_alpha", rep.worst_alpha}};
      if (!rep.pass) ctx.check_failure = "containment fails with margin " + format_number(rep.worst_margin);
      return r;
    }
    case TaskKind::coarse_graining: {
      std::size_t feasible = 0;
      double worst = 0.0;
      for (std::size_t i = 0; i < p.instance_count; ++i) {
        const DiscreteObservable y = random_povm(ctx.rng, 2, 2 + ctx.rng.below(3));
        const DiscreteObservable x = pullback(y, n);
        const PreservationVerdict v = preservation_witness(x, n, opts);
        if (v.status != VerdictStatus::feasible) continue;
        ++feasible;
        worst = std::max(worst, coarse_graining_witness(x, sic, opts.eps_feas, opts.max_iter).residual);
      }
      json r = {{"instances", p.instance_count}, {"feasible", feasible}, {"worst_residual", worst}};
      if (worst > opts.eps_feas) {
        ctx.check_failure = "a preserved observable is not a coarse-graining of the SIC-POVM (residual " +
                          format_number(worst) + ")";
      }
      return r;
    }
    default:
      break;
  }
  throw Error("task not available for cloning_sic");
}

json measurement_copy_task(TaskKind task, TaskContext& ctx, const MeasurementCopyParams& p) {
  const SolverOptions& opts = ctx.config.solver;
  const BroadcastModel model = measurement_copy_channel(p.gamma, p.n);

  switch (task) {
    case TaskKind::redundancy: {
      const RedundancyReport rep = redundancy_report(model, p.gamma, opts);
      for (const FragmentVerdict& f : rep.fragments) add_trace(ctx, "redundancy", f.verdict);
      return {{"redundancy", rep.redundancy}, {"fragments", fragments_json(rep)}};
    }
    case TaskKind::joint_pointer: {
      double worst = 0.0;
      json point = joint_pointer_point(model, p.gamma, opts, worst);
      point["worst_residual"] = worst;
      return point;
    }
    case TaskKind::correlation: {
      const std::vector<DiscreteObservable> readouts(p.n, computational_basis_measurement(p.gamma.outcome_count()));
      const double off = max_off_diagonal(model, readouts, p.correlation_states, ctx.rng);
      return {{"gamma_sharp", is_sharp(p.gamma)}, {"max_off_diagonal", off}, {"states", p.correlation_states}};
    }
    default:
      break;
  }
  throw Error("task not available for measurement_copy");
}

json custom_task(TaskKind task, TaskContext& ctx, const CustomChannelParams& p) {
  const SolverOptions& opts = ctx.config.solver;
  const QuantumChannel& n = p.joint();
  json items = json::array();

  switch (task) {
    case TaskKind::preservation:
      for (const DiscreteObservable& x : p.observables) {
        const PreservationVerdict v = preservation_witness(x, n, opts);
        add_trace(ctx, "preservation", v);
        items.push_back(verdict_to_json(v));
      }
      return {{"verdicts", std::move(items)}};
    case TaskKind::correctability: {
      std::size_t violations = 0;
      for (const DiscreteObservable& x : p.observables) {
        if (!is_sharp(x)) {
          items.push_back({{"sharp", false}});
          continue;
        }
        const PreservationVerdict v = preservation_witness(x, n, opts);
        const std::vector<bool> ok = sharp_correctability_check(x.elements(), n);
        const bool all = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
        const bool violated = v.status == VerdictStatus::feasible && !all;
        violations += violated ? 1 : 0;
        items.push_back({{"sharp", true}, {"status", to_string(v.status)}, {"residual", v.residual},
                         {"correctable", ok}, {"violation", violated}});
      }
      json r = {{"observables", std::move(items)}, {"violations", violations}};
      if (violations > 0) {
        ctx.check_failure = std::to_string(violations) + " preserved sharp observable(s) fail the correctability condition";
      }
      return r;
    }
    case TaskKind::coarse_graining:
      for (const DiscreteObservable& x : p.observables) {
        const CoarseGrainingResult cg = coarse_graining_witness(x, *p.gamma, opts.eps_feas, opts.max_iter);
        json e = {{"feasible", cg.feasible}, {"residual", cg.residual}, {"iterations", cg.iterations}};
        if (cg.matrix) e["matrix"] = stochastic_to_json(*cg.matrix);
        items.push_back(std::move(e));
      }
      return {{"results", std::move(items)}};
    case TaskKind::redundancy:
      for (const DiscreteObservable& x : p.observables) {
        const RedundancyReport rep = redundancy_report(*p.model, x, opts);
        items.push_back({{"redundancy", rep.redundancy}, {"fragments", fragments_json(rep)}});
      }
      return {{"observables", std::move(items)}};
    default:
      break;
  }
  throw Error("task not available for custom_channel");
}

// Distinct, order-independent stream per task.
std::uint64_t task_seed(std::uint64_t seed, TaskKind t) {
  SplitMix64 mix(seed ^ (0x5851f42d4c957f2dULL * (static_cast<std::uint64_t>(t) + 1)));
  return mix();
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config) {
  RunReport report;
  report.config = config;
  for (TaskKind task : config.tasks) {
    TaskResult tr;
    tr.task = task;
    TaskContext ctx{config, report.series, SplitMix64(task_seed(config.seed, task)), {}};
    const auto start = std::chrono::steady_clock::now();
    try {
      tr.result = std::visit(
          [&](const auto& p) -> json {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CanonicalParams>) return canonical_task(task, ctx, p);
            if constexpr (std::is_same_v<P, CloningParams>) return cloning_task(task, ctx, p);
            if constexpr (std::is_same_v<P, MeasurementCopyParams>) return measurement_copy_task(task, ctx, p);
            if constexpr (std::is_same_v<P, CustomChannelParams>) return custom_task(task, ctx, p);
          },
          config.params);
      tr.ok = ctx.check_failure.empty();
      tr.error = ctx.check_failure;
    } catch (const std::exception& e) {
      tr.ok = false;
      tr.error = e.what();
    }
    tr.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.tasks.push_back(std::move(tr));
  }
  return report;
}

}  // namespace pointer_lab
