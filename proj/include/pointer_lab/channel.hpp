// SPDX-License-Identifier: Apache-2.0
//
// Quantum channels in Kraus form. Convention: N(rho) = sum_k E_k rho E_k^dagger,
// so the Heisenberg-picture (adjoint) map is N*(B) = sum_k E_k^dagger B E_k.

#pragma once

#include <string>
#include <vector>

#include "pointer_lab/linalg.hpp"

namespace pointer_lab {

class QuantumChannel {
 public:
  QuantumChannel() = default;
  // Rejects empty Kraus sets, inconsistent shapes, and
  // ||sum_k E_k^dagger E_k - 1||_F > tol.
  QuantumChannel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> kraus,
                 double tol = tol_recon);

  static QuantumChannel identity(std::size_t dim);
  // Kills every off-diagonal entry in the computational basis.
  static QuantumChannel complete_dephasing(std::size_t dim);
  static QuantumChannel amplitude_damping(double gamma);
  // rho -> U rho U^dagger
  static QuantumChannel unitary(const ComplexMatrix& u);
  // rho -> Tr(rho) sigma
  static QuantumChannel constant(std::size_t dim_in, const DensityMatrix& sigma);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  // ||sum_k E_k^dagger E_k - 1||_F
  double trace_preservation_defect() const;

 private:
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
  std::vector<ComplexMatrix> kraus_;
};

// Schrodinger picture on an arbitrary operator (linear extension).
ComplexMatrix apply(const QuantumChannel& n, const ComplexMatrix& m);
DensityMatrix apply(const QuantumChannel& n, const DensityMatrix& rho);

// Heisenberg picture.
ComplexMatrix adjoint_apply(const QuantumChannel& n, const ComplexMatrix& b);
HermitianOperator adjoint_apply(const QuantumChannel& n, const HermitianOperator& b);

// outer after inner: rho -> outer(inner(rho)).
QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);

QuantumChannel tensor_channel(const QuantumChannel& a, const QuantumChannel& b);

// rho -> U (rho (x) |psi><psi|) U^dagger with the full system (x) environment
// output kept. env_state must be pure; its dominant eigenvector is used.
QuantumChannel from_dilation(const ComplexMatrix& u, const DensityMatrix& env_state,
                             std::size_t sys_dim);

// The system-only reduction of the same dilation, with Kraus operators
// (1 (x) <k|) U (1 (x) |psi>) over the environment basis.
QuantumChannel system_channel_from_dilation(const ComplexMatrix& u, const DensityMatrix& env_state,
                                            std::size_t sys_dim);

// (1 (x) N)(|Omega><Omega|), |Omega> = sum_a |a>|a>, input factor first.
HermitianOperator choi(const QuantumChannel& n);

// Kraus operators from the Choi eigendecomposition; eigenvalues below
// rank_cutoff are dropped.
QuantumChannel channel_from_choi(const HermitianOperator& c, std::size_t dim_in,
                                 std::size_t dim_out, double rank_cutoff = 1e-12);

class BroadcastModel {
 public:
  BroadcastModel() = default;
  BroadcastModel(QuantumChannel joint, std::vector<std::size_t> fragment_dims,
                 std::vector<std::string> labels);

  const QuantumChannel& joint() const { return joint_; }
  const std::vector<std::size_t>& fragment_dims() const { return fragment_dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t fragment_count() const { return fragment_dims_.size(); }
  std::size_t dim_in() const { return joint_.dim_in(); }

 private:
  QuantumChannel joint_;
  std::vector<std::size_t> fragment_dims_;
  std::vector<std::string> labels_;
};

// Channel to fragment i alone: partial trace of the joint output, returned
// in Kraus form through the Choi matrix of the reduced map.
QuantumChannel marginal(const BroadcastModel& model, std::size_t i);

// Channel to an ordered subset of fragments (ascending factor order).
QuantumChannel marginal(const BroadcastModel& model, std::span<const std::size_t> keep);

}  // namespace pointer_lab
