// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/random.hpp"

#include <cmath>
#include <numbers>

#include "pointer_lab/channel.hpp"
#include "pointer_lab/observable.hpp"

namespace pointer_lab {

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

std::size_t SplitMix64::below(std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::vector<cplx> random_unit_vector(SplitMix64& rng, std::size_t dim) {
  std::vector<cplx> v(dim);
  double nrm2 = 0.0;
  do {
    nrm2 = 0.0;
    for (cplx& z : v) {
      const double re = rng.normal();
      const double im = rng.normal();
      z = {re, im};
      nrm2 += re * re + im * im;
    }
  } while (nrm2 == 0.0);
  const double inv = 1.0 / std::sqrt(nrm2);
  for (cplx& z : v) z *= inv;
  return v;
}

namespace {

ComplexMatrix gaussian_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix g(rows, cols);
  for (cplx& z : g.entries()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = {re, im};
  }
  return g;
}

// Modified Gram-Schmidt on the columns; returns a matrix with orthonormal columns.
ComplexMatrix orthonormalize_columns(ComplexMatrix g) {
  const std::size_t r = g.rows();
  for (std::size_t c = 0; c < g.cols(); ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      cplx dot{};
      for (std::size_t i = 0; i < r; ++i) dot += std::conj(g(i, p)) * g(i, c);
      for (std::size_t i = 0; i < r; ++i) g(i, c) -= dot * g(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < r; ++i) nrm += std::norm(g(i, c));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < r; ++i) g(i, c) /= nrm;
  }
  return g;
}

}  // namespace

HermitianOperator random_hermitian(SplitMix64& rng, std::size_t dim) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, dim);
  ComplexMatrix h = g + g.adjoint();
  h *= 0.5;
  return HermitianOperator(h);
}

ComplexMatrix random_unitary(SplitMix64& rng, std::size_t dim) {
  return orthonormalize_columns(gaussian_matrix(rng, dim, dim));
}

DensityMatrix random_density_matrix(SplitMix64& rng, std::size_t dim) {
  const ComplexMatrix g = gaussian_matrix(rng, dim, dim);
  ComplexMatrix w = g * g.adjoint();
  w *= 1.0 / w.trace().real();
  return DensityMatrix(HermitianOperator(w, 1e-10), 1e-10);
}

DiscreteObservable random_povm(SplitMix64& rng, std::size_t dim, std::size_t outcomes) {
  std::vector<ComplexMatrix> gs;
  ComplexMatrix s(dim, dim);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = gaussian_matrix(rng, dim, dim);
    gs.push_back(g * g.adjoint());
    s += gs.back();
  }
  const ComplexMatrix s_inv_half =
      spectral_function(HermitianOperator(s, 1e-9), [](double v) { return 1.0 / std::sqrt(v); }).matrix();
  std::vector<HermitianOperator> els;
  for (const ComplexMatrix& g : gs) els.emplace_back(s_inv_half * g * s_inv_half, 1e-9);
  return validate_povm(std::move(els), {}, 1e-9);
}

QuantumChannel random_channel(SplitMix64& rng, std::size_t dim_in, std::size_t dim_out,
                              std::size_t kraus_count) {
  if (dim_in == 0 || dim_out == 0 || kraus_count == 0) throw DimensionError("random channel dimensions must be positive");
  if (dim_out * kraus_count < dim_in) {
    throw DimensionError("no channel from dimension " + std::to_string(dim_in) + " with " +
                         std::to_string(kraus_count) + " Kraus operators of output dimension " +
                         std::to_string(dim_out));
  }
  // Stacked Kraus operators form an isometry dim_in -> kraus_count * dim_out.
  const ComplexMatrix v = orthonormalize_columns(gaussian_matrix(rng, kraus_count * dim_out, dim_in));
  std::vector<ComplexMatrix> ks;
  for (std::size_t k = 0; k < kraus_count; ++k) {
    ComplexMatrix e(dim_out, dim_in);
    for (std::size_t i = 0; i < dim_out; ++i)
      for (std::size_t a = 0; a < dim_in; ++a) e(i, a) = v(k * dim_out + i, a);
    ks.push_back(std::move(e));
  }
  return QuantumChannel(dim_in, dim_out, std::move(ks), 1e-9);
}

}  // namespace pointer_lab
