// SPDX-License-Identifier: Apache-2.0
//
// Deciding whether an observable X survives a channel N, i.e. whether some
// observable Y on the output satisfies N*(Y_i) = X_i for every outcome,
// and the constructions built on top of that decision: the broadcast
// intersection over several channels, the joint pointer observable, and
// the correctability and correlation checks.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pointer_lab/channel.hpp"
#include "pointer_lab/observable.hpp"

namespace pointer_lab {

struct SolverOptions {
  double eps_feas = 1e-8;
  double eps_infeas = 1e-6;
  int max_iter = 50000;
  std::uint64_t seed = 0;
  bool record_trace = false;

  // Throws when eps_feas >= eps_infeas or a value is out of range.
  void validate() const;
};

enum class VerdictStatus { feasible, infeasible, undecided };

std::string to_string(VerdictStatus s);

struct PreservationVerdict {
  VerdictStatus status = VerdictStatus::undecided;
  std::optional<DiscreteObservable> witness;  // present iff feasible
  // sqrt(sum_i ||N*(Y_i) - X_i||^2 + ||sum_i Y_i - 1||^2) at the best PSD iterate
  double residual = 0.0;
  int iterations = 0;
  // The affine iterate paired with the best PSD iterate, before clipping.
  // For infeasible problems with a unique linear solution this is that
  // solution, and its negative eigenvalues are the obstruction.
  std::vector<HermitianOperator> affine_iterate;
  double affine_min_eigenvalue = 0.0;
  // Residual of the least-squares solution set of the equality constraints
  // alone; nonzero means no Hermitian Y exists at all.
  double equality_inconsistency = 0.0;
  std::vector<double> trace;  // best residual per iteration when requested
};

PreservationVerdict preservation_witness(const DiscreteObservable& x, const QuantumChannel& n,
                                         const SolverOptions& opts = {});

// Per projector: P (E_k^dagger E_k) = (E_k^dagger E_k) P for every Kraus
// operator, within tol. Necessary for P to be an effect of a preserved
// sharp observable; not sufficient.
std::vector<bool> sharp_correctability_check(std::span<const HermitianOperator> projectors,
                                             const QuantumChannel& n, double tol = tol_recon);

struct IntersectionResult {
  std::vector<PreservationVerdict> verdicts;
  bool in_intersection = false;
  std::size_t feasible_count = 0;
};

IntersectionResult in_intersection(const DiscreteObservable& x, std::span<const QuantumChannel> channels,
                                   const SolverOptions& opts = {});

inline constexpr std::size_t kMaxJointOutcomes = 1'000'000;

// Gamma_{j1..jn} = N*(Y1_{j1} (x) ... (x) Yn_{jn}); outcome index is mixed
// radix with fragment 0 most significant.
DiscreteObservable joint_pointer_observable(std::span<const DiscreteObservable> witnesses,
                                            const BroadcastModel& model);

// Sums Gamma's elements over every fragment index except `fragment`.
DiscreteObservable joint_marginal(const DiscreteObservable& gamma,
                                  std::span<const std::size_t> outcome_counts, std::size_t fragment);

// Per fragment: max_a ||marginal_a(Gamma) - N_i*(Y_i,a)||_F.
std::vector<double> marginal_consistency_residuals(const DiscreteObservable& gamma,
                                                   std::span<const DiscreteObservable> witnesses,
                                                   const BroadcastModel& model);

// C_ab = Tr(N(rho) (... (x) Y_a (x) ... (x) Z_b (x) ...)), Y on fragment i,
// Z on fragment j, identities elsewhere.
std::vector<std::vector<double>> correlation_matrix(const BroadcastModel& model, std::size_t i,
                                                    std::size_t j, const DiscreteObservable& y,
                                                    const DiscreteObservable& z,
                                                    const DensityMatrix& rho);

}  // namespace pointer_lab
