// SPDX-License-Identifier: Apache-2.0
//
// The single seeded generator used by every sampling routine, plus samplers
// for random states, operators, observables and channels.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pointer_lab/linalg.hpp"

namespace pointer_lab {

class QuantumChannel;
class DiscreteObservable;

// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, increment
// 0x9e3779b97f4a7c15, output mix with constants 0xbf58476d1ce4e5b9 and
// 0x94d049bb133111eb. Gaussians use Box-Muller on two uniform draws.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal();
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Haar-random unit vector (normalized complex Gaussian).
std::vector<cplx> random_unit_vector(SplitMix64& rng, std::size_t dim);

// GUE-like Hermitian with unit-variance Gaussian entries.
HermitianOperator random_hermitian(SplitMix64& rng, std::size_t dim);

// Haar-random unitary from Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix random_unitary(SplitMix64& rng, std::size_t dim);

// Hilbert-Schmidt random mixed state.
DensityMatrix random_density_matrix(SplitMix64& rng, std::size_t dim);

// Random full-rank POVM: S^{-1/2} G_i S^{-1/2} with Wishart G_i.
DiscreteObservable random_povm(SplitMix64& rng, std::size_t dim, std::size_t outcomes);

// Random channel from a Haar isometry dim_in -> dim_out * kraus_count.
// Requires dim_out * kraus_count >= dim_in.
QuantumChannel random_channel(SplitMix64& rng, std::size_t dim_in, std::size_t dim_out,
                              std::size_t kraus_count);

}  // namespace pointer_lab
