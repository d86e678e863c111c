// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "pointer_lab/random.hpp"

namespace pointer_lab {

DensityMatrix plus_state() {
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx v[] = {r, r};
  return DensityMatrix::pure(v);
}

void CanonicalModelSpec::validate() const {
  if (couplings.empty()) throw Error("canonical model needs at least one environment qubit");
  if (!env_initial.empty() && env_initial.size() != couplings.size()) {
    throw Error("env_initial has " + std::to_string(env_initial.size()) + " states for " +
                std::to_string(couplings.size()) + " environment qubits");
  }
  for (std::size_t i = 0; i < env_initial.size(); ++i) {
    if (env_initial[i].dim() != 2) throw DimensionError("environment fragments are qubits");
    if (!env_initial[i].is_pure()) {
      throw Error("env_initial[" + std::to_string(i) + "] is not a pure state");
    }
  }
  if (k.dim() != 2) throw DimensionError("K acts on a single environment qubit");
  std::size_t dim = j.dim();
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    dim *= 2;
    if (dim > kMaxJointDim) {
      throw Error("system dimension x 2^n exceeds " + std::to_string(kMaxJointDim));
    }
  }
}

ComplexMatrix canonical_unitary(const CanonicalModelSpec& spec) {
  spec.validate();
  const EigenDecomposition je = eigh(spec.j);
  const EigenDecomposition ke = eigh(spec.k);
  const std::size_t n = spec.env_count();
  const std::size_t env_dim = std::size_t{1} << n;

  // sum_i g_i K^(i) = W^{(x)n} diag(mu) W^{(x)n dagger}
  std::vector<double> mu(env_dim, 0.0);
  for (std::size_t b = 0; b < env_dim; ++b)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t bit = (b >> (n - 1 - i)) & 1U;
      mu[b] += spec.couplings[i] * ke.values[bit];
    }
  std::vector<ComplexMatrix> factors{je.vectors};
  for (std::size_t i = 0; i < n; ++i) factors.push_back(ke.vectors);
  const ComplexMatrix basis = tensor(factors);

  const std::size_t ds = spec.j.dim();
  ComplexMatrix phased = basis;
  for (std::size_t a = 0; a < ds; ++a)
    for (std::size_t b = 0; b < env_dim; ++b) {
      const cplx ph = std::polar(1.0, -spec.t * je.values[a] * mu[b]);
      const std::size_t col = a * env_dim + b;
      for (std::size_t r = 0; r < basis.rows(); ++r) phased(r, col) *= ph;
    }
  return phased * basis.adjoint();
}

DensityMatrix canonical_environment(const CanonicalModelSpec& spec) {
  std::vector<ComplexMatrix> states;
  const DensityMatrix plus = plus_state();
  for (std::size_t i = 0; i < spec.env_count(); ++i) {
    states.push_back(spec.env_initial.empty() ? plus.matrix() : spec.env_initial[i].matrix());
  }
  return DensityMatrix(HermitianOperator(tensor(states), 1e-10), 1e-10);
}

BroadcastModel canonical_model(const CanonicalModelSpec& spec) {
  spec.validate();
  const ComplexMatrix u = canonical_unitary(spec);
  const DensityMatrix env = canonical_environment(spec);
  std::vector<std::size_t> dims{spec.j.dim()};
  std::vector<std::string> labels{"A"};
  for (std::size_t i = 0; i < spec.env_count(); ++i) {
    dims.push_back(2);
    labels.push_back("E" + std::to_string(i + 1));
  }
  return BroadcastModel(from_dilation(u, env, spec.j.dim()), std::move(dims), std::move(labels));
}

double decoherence_factor(const CanonicalModelSpec& spec) {
  spec.validate();
  const EigenDecomposition je = eigh(spec.j);
  const std::size_t ds = spec.j.dim();
  if (je.values.back() - je.values.front() <= 1e-12) return 1.0;

  std::vector<cplx> plus(ds);
  for (std::size_t i = 0; i < ds; ++i) plus[i] = (je.vectors(i, 0) + je.vectors(i, ds - 1)) / std::numbers::sqrt2;
  const DensityMatrix rho = DensityMatrix::pure(plus);

  const BroadcastModel model = canonical_model(spec);
  const ComplexMatrix joint_out = apply(model.joint(), rho.matrix());
  const std::size_t keep[] = {0};
  const ComplexMatrix reduced = partial_trace(joint_out, model.fragment_dims(), keep);

  auto coherence = [&](const ComplexMatrix& m) {
    cplx acc{};
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < ds; ++j) acc += std::conj(je.vectors(i, ds - 1)) * m(i, j) * je.vectors(j, 0);
    return std::abs(acc);
  };
  return coherence(reduced) / coherence(rho.matrix());
}

double decoherence_factor_product(const CanonicalModelSpec& spec) {
  spec.validate();
  const EigenDecomposition je = eigh(spec.j);
  const double gap = je.values.back() - je.values.front();
  if (gap <= 1e-12) return 1.0;
  const DensityMatrix plus = plus_state();
  double f = 1.0;
  for (std::size_t i = 0; i < spec.env_count(); ++i) {
    const ComplexMatrix& psi = spec.env_initial.empty() ? plus.matrix() : spec.env_initial[i].matrix();
    const ComplexMatrix u = unitary_from_hamiltonian(spec.k, spec.t * gap * spec.couplings[i]);
    f *= std::abs(trace_of_product(psi, u));
  }
  return f;
}

QuantumChannel cloning_channel() {
  // Depolarizing map with Bloch shrink 1/3: weights 1/2 on 1, 1/6 on each Pauli.
  const double w0 = std::sqrt(0.5);
  const double w1 = std::sqrt(1.0 / 6.0);
  return QuantumChannel(2, 2,
                        {ComplexMatrix::identity(2) * cplx{w0}, pauli::x() * cplx{w1},
                         pauli::y() * cplx{w1}, pauli::z() * cplx{w1}});
}

std::array<std::array<double, 3>, 4> tetrahedron(const std::array<double, 3>& orientation) {
  const double nrm = std::sqrt(orientation[0] * orientation[0] + orientation[1] * orientation[1] +
                               orientation[2] * orientation[2]);
  if (!(nrm > 1e-12)) throw Error("tetrahedron orientation must be a nonzero vector");
  const std::array<double, 3> o{orientation[0] / nrm, orientation[1] / nrm, orientation[2] / nrm};

  const double s2 = std::numbers::sqrt2;
  const double s6 = std::sqrt(6.0);
  std::array<std::array<double, 3>, 4> base{{{0.0, 0.0, 1.0},
                                             {2.0 * s2 / 3.0, 0.0, -1.0 / 3.0},
                                             {-s2 / 3.0, s6 / 3.0, -1.0 / 3.0},
                                             {-s2 / 3.0, -s6 / 3.0, -1.0 / 3.0}}};

  // Rotation taking +z to o (Rodrigues with k = z x o, c = z . o).
  const double c = o[2];
  std::array<std::array<double, 3>, 3> r{};
  if (c < -1.0 + 1e-12) {
    r = {{{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}}};
  } else {
    const double kx = -o[1], ky = o[0];
    const double f = 1.0 / (1.0 + c);
    // R = I + [k]x + [k]x^2 f, with k = (kx, ky, 0)
    r = {{{1.0 - ky * ky * f, kx * ky * f, ky},
          {kx * ky * f, 1.0 - kx * kx * f, -kx},
          {-ky, kx, 1.0 - (kx * kx + ky * ky) * f}}};
  }
  std::array<std::array<double, 3>, 4> out{};
  for (std::size_t v = 0; v < 4; ++v)
    for (std::size_t i = 0; i < 3; ++i) {
      out[v][i] = r[i][0] * base[v][0] + r[i][1] * base[v][1] + r[i][2] * base[v][2];
    }
  return out;
}

DiscreteObservable sic_povm(const std::array<double, 3>& orientation) {
  const auto verts = tetrahedron(orientation);
  const ComplexMatrix sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  std::vector<HermitianOperator> els;
  for (const auto& v : verts) {
    ComplexMatrix m = ComplexMatrix::identity(2) + sx * cplx{v[0]} + sy * cplx{v[1]} + sz * cplx{v[2]};
    m *= 0.25;
    els.emplace_back(m);
  }
  return validate_povm(std::move(els));
}

ContainmentReport containment_check(const QuantumChannel& n, const DiscreteObservable& gamma,
                                    std::size_t sample_count, std::uint64_t seed) {
  if (gamma.dim() != n.dim_in()) throw DimensionError("observable does not act on the channel input");
  if (gram_min_eigenvalue(gamma) < 1e-10) throw Error("observable elements are linearly dependent");

  const std::size_t d = n.dim_out();
  std::vector<HermitianOperator> fixed{HermitianOperator::zero(d), HermitianOperator::identity(d)};
  if (d == 2) {
    const ComplexMatrix paulis[] = {pauli::x(), pauli::y(), pauli::z()};
    for (const ComplexMatrix& p : paulis)
      for (double sign : {1.0, -1.0}) {
        ComplexMatrix m = ComplexMatrix::identity(2) + p * cplx{sign};
        m *= 0.5;
        fixed.emplace_back(m);
      }
  } else {
    for (std::size_t k = 0; k < d; ++k) fixed.push_back(HermitianOperator::projector(basis_vector(d, k)));
  }

  ContainmentReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  auto check = [&](const HermitianOperator& p) {
    const SimplexCoefficients sc = simplex_coefficients(adjoint_apply(n, p), gamma);
    if (sc.margin < rep.worst_margin) {
      rep.worst_margin = sc.margin;
      rep.worst_sample = rep.samples;
      rep.worst_alpha = sc.alpha;
    }
    ++rep.samples;
  };
  for (const HermitianOperator& p : fixed) check(p);
  SplitMix64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) check(HermitianOperator::projector(random_unit_vector(rng, d)));
  rep.pass = rep.worst_margin >= -1e-10;
  return rep;
}

BroadcastModel measurement_copy_channel(const DiscreteObservable& gamma, std::size_t n) {
  if (n == 0) throw Error("measurement copy channel needs at least one register");
  const std::size_t k = gamma.outcome_count();
  std::size_t total = 1;
  std::size_t diag_step = 0;  // index step between |x..x> and |x+1..x+1>
  for (std::size_t i = 0; i < n; ++i) {
    diag_step += total;
    total *= k;
    if (total > kMaxJointOutcomes) throw Error("measurement copy channel exceeds 10^6 register states");
  }
  const std::size_t d = gamma.dim();
  std::vector<ComplexMatrix> ks;
  for (std::size_t x = 0; x < k; ++x) {
    const ComplexMatrix root = spectral_function(gamma.element(x), [](double v) {
                                 return v > 0.0 ? std::sqrt(v) : 0.0;
                               }).matrix();
    const std::size_t row = x * diag_step;
    for (std::size_t j = 0; j < d; ++j) {
      // |x..x><j| sqrt(Gamma_x)
      ComplexMatrix e(total, d);
      for (std::size_t a = 0; a < d; ++a) e(row, a) = root(j, a);
      ks.push_back(std::move(e));
    }
  }
  std::vector<std::size_t> dims(n, k);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("R" + std::to_string(i + 1));
  return BroadcastModel(QuantumChannel(d, total, std::move(ks), 1e-9), std::move(dims), std::move(labels));
}

std::vector<QuantumChannel> all_marginals(const BroadcastModel& model) {
  std::vector<QuantumChannel> out;
  for (std::size_t i = 0; i < model.fragment_count(); ++i) out.push_back(marginal(model, i));
  return out;
}

RedundancyReport redundancy_report(const BroadcastModel& model, const DiscreteObservable& x,
                                   const SolverOptions& opts, std::optional<double> decoherence_factor,
                                   double time) {
  if (x.dim() != model.dim_in()) throw DimensionError("observable does not act on the model input");
  const std::vector<QuantumChannel> channels = all_marginals(model);
  IntersectionResult ir = in_intersection(x, channels, opts);
  RedundancyReport rep;
  rep.time = time;
  rep.redundancy = ir.feasible_count;
  rep.decoherence_factor = decoherence_factor;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    rep.fragments.push_back({model.labels()[i], std::move(ir.verdicts[i])});
  }
  return rep;
}

}  // namespace pointer_lab
