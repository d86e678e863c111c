// SPDX-License-Identifier: Apache-2.0
//
// Worked broadcast scenarios: the spin-environment decoherence model, the
// symmetric cloning channel with its SIC-POVM analysis, and the
// measure-and-copy channel.

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pointer_lab/channel.hpp"
#include "pointer_lab/observable.hpp"
#include "pointer_lab/preservation.hpp"

namespace pointer_lab {

inline constexpr std::size_t kMaxJointDim = 1024;

// H = J (x) sum_i g_i K^(i), environment qubits initially in env_initial.
struct CanonicalModelSpec {
  HermitianOperator j = HermitianOperator(pauli::z());
  std::vector<double> couplings = {1.0, 1.0, 1.0, 1.0};
  // One pure state per environment qubit; empty means |+> for all.
  std::vector<DensityMatrix> env_initial;
  HermitianOperator k = HermitianOperator(pauli::z());
  double t = 0.0;

  std::size_t env_count() const { return couplings.size(); }
  void validate() const;
};

DensityMatrix plus_state();

// Fragments: system "A" followed by environment qubits "E1".."En".
BroadcastModel canonical_model(const CanonicalModelSpec& spec);

// The dilation unitary exp(-i t J (x) sum_i g_i K^(i)), built from the
// eigendecompositions of J and K.
ComplexMatrix canonical_unitary(const CanonicalModelSpec& spec);

// Product environment state |psi_1> (x) ... (x) |psi_n>.
DensityMatrix canonical_environment(const CanonicalModelSpec& spec);

// |<e_max| N_A(rho) |e_min>| / |<e_max| rho |e_min>| for rho = |+><+| in the
// eigenbasis of J (extreme eigenvalues), from the simulated system marginal.
// Degenerate J gives 1.
double decoherence_factor(const CanonicalModelSpec& spec);

// Product form prod_i |<psi_i| exp(-i t (l_max - l_min) g_i K) |psi_i>| of the
// same quantity, evaluated one environment qubit at a time.
double decoherence_factor_product(const CanonicalModelSpec& spec);

// rho -> rho/3 + Tr(rho) 1/3 on a qubit.
QuantumChannel cloning_channel();

// Regular tetrahedron with its first vertex along `orientation`.
std::array<std::array<double, 3>, 4> tetrahedron(const std::array<double, 3>& orientation);

// Gamma_i = (1 + v_i . sigma) / 4.
DiscreteObservable sic_povm(const std::array<double, 3>& orientation = {0.0, 0.0, 1.0});

struct ContainmentReport {
  bool pass = false;
  std::size_t samples = 0;
  double worst_margin = 0.0;  // min over samples of min_i min(alpha_i, 1 - alpha_i)
  std::size_t worst_sample = 0;
  std::vector<double> worst_alpha;
};

// Checks N*(P) lies in {sum_i alpha_i Gamma_i : 0 <= alpha_i <= 1} for P = 0,
// 1, the axis projectors and sample_count Haar-random rank-1 projectors.
ContainmentReport containment_check(const QuantumChannel& n, const DiscreteObservable& gamma,
                                    std::size_t sample_count, std::uint64_t seed);

// rho -> sum_x Tr(Gamma_x rho) |x..x><x..x| on n registers of dimension
// outcome_count, each embedded as a diagonal quantum system.
BroadcastModel measurement_copy_channel(const DiscreteObservable& gamma, std::size_t n);

struct FragmentVerdict {
  std::string label;
  PreservationVerdict verdict;
};

struct RedundancyReport {
  double time = 0.0;
  std::vector<FragmentVerdict> fragments;
  std::size_t redundancy = 0;
  std::optional<double> decoherence_factor;
};

RedundancyReport redundancy_report(const BroadcastModel& model, const DiscreteObservable& x,
                                   const SolverOptions& opts,
                                   std::optional<double> decoherence_factor = std::nullopt,
                                   double time = 0.0);

std::vector<QuantumChannel> all_marginals(const BroadcastModel& model);

}  // namespace pointer_lab
