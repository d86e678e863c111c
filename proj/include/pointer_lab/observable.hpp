// SPDX-License-Identifier: Apache-2.0
//
// Finite-outcome observables (POVMs), their classical post-processing by
// stochastic matrices, and Heisenberg-picture pullback through channels.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pointer_lab/channel.hpp"
#include "pointer_lab/linalg.hpp"

namespace pointer_lab {

class DiscreteObservable {
 public:
  DiscreteObservable() = default;

  std::size_t dim() const { return dim_; }
  std::size_t outcome_count() const { return elements_.size(); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const HermitianOperator& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<std::string>& outcome_labels() const { return labels_; }

  // ||sum_i X_i - 1||_F
  double normalization_residual() const;

 private:
  friend DiscreteObservable validate_povm(std::vector<HermitianOperator>, std::vector<std::string>,
                                          double);
  std::size_t dim_ = 0;
  std::vector<HermitianOperator> elements_;
  std::vector<std::string> labels_;
};

// Checks every element is an effect and that the elements sum to the
// identity within tol. Missing labels default to "0", "1", ...
DiscreteObservable validate_povm(std::vector<HermitianOperator> elements,
                                 std::vector<std::string> labels = {}, double tol = tol_recon);

// Spectral measure of H: one projector per distinct eigenvalue (eigenvalues
// closer than tol are merged), ordered by ascending eigenvalue.
DiscreteObservable spectral_measure(const HermitianOperator& h, double tol = 1e-10);

// Projective measurement in the computational basis.
DiscreteObservable computational_basis_measurement(std::size_t dim);

// {1/k, ..., 1/k}
DiscreteObservable trivial_observable(std::size_t dim, std::size_t outcomes);

// p_i = Tr(rho X_i)
std::vector<double> probabilities(const DiscreteObservable& x, const DensityMatrix& rho);

// X_i^2 = X_i within tol for every element.
bool is_sharp(const DiscreteObservable& x, double tol = tol_recon);

// Row i holds the distribution over target outcomes assigned to source
// outcome i: entries in [0, 1] and every row sums to 1. The coarse-grained
// observable has elements X_k = sum_i p(i, k) Gamma_i.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                   double tol = 1e-12);

  static StochasticMatrix identity(std::size_t n);
  static StochasticMatrix uniform(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t k) const { return p_[i * cols_ + k]; }
  const std::vector<double>& entries() const { return p_; }

  friend StochasticMatrix operator*(const StochasticMatrix& a, const StochasticMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

DiscreteObservable coarse_grain(const DiscreteObservable& gamma, const StochasticMatrix& p);

// X_i = N*(Y_i)
DiscreteObservable pullback(const DiscreteObservable& y, const QuantumChannel& n);

struct CoarseGrainingResult {
  bool feasible = false;
  std::optional<StochasticMatrix> matrix;
  // sqrt(sum_k ||sum_i p(i,k) Gamma_i - X_k||_F^2) for the returned or best matrix
  double residual = 0.0;
  bool direct_solve = false;  // true when Gamma's elements were linearly independent
  int iterations = 0;
};

// Looks for a stochastic p with X_k = sum_i p(i, k) Gamma_i.
CoarseGrainingResult coarse_graining_witness(const DiscreteObservable& x,
                                             const DiscreteObservable& gamma,
                                             double eps = 1e-8, int max_iter = 50000);

struct SimplexCoefficients {
  std::vector<double> alpha;
  bool inside = false;  // every alpha_i in [-1e-10, 1 + 1e-10]
  double margin = 0.0;  // min_i min(alpha_i, 1 - alpha_i)
};

// Unique expansion A = sum_i alpha_i Gamma_i for linearly independent
// elements. Throws when the elements are dependent or A lies outside
// their span.
SimplexCoefficients simplex_coefficients(const HermitianOperator& a, const DiscreteObservable& gamma);

// Smallest eigenvalue of the Gram matrix Tr(Gamma_i Gamma_j).
double gram_min_eigenvalue(const DiscreteObservable& gamma);

}  // namespace pointer_lab
