// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "pointer_lab/linalg.hpp"
#include "pointer_lab/random.hpp"

using namespace pointer_lab;

namespace {

double reconstruction_error(const HermitianOperator& h, const EigenDecomposition& e) {
  const std::size_t n = h.dim();
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
  return frobenius_distance(oracle::matmul(oracle::matmul(e.vectors, d), oracle::dagger(e.vectors)), h.matrix());
}

}  // namespace

TEST_CASE("HermitianOperator rejects non-Hermitian input") {
  const ComplexMatrix m{{1.0, 2.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(HermitianOperator{m}, Error);
  const ComplexMatrix r(2, 3);
  CHECK_THROWS_AS(HermitianOperator{r}, DimensionError);
}

TEST_CASE("eigh on small fixed inputs") {
  const EigenDecomposition id = eigh(HermitianOperator::identity(2));
  CHECK(id.values[0] == doctest::Approx(1.0));
  CHECK(id.values[1] == doctest::Approx(1.0));
  CHECK(frobenius_distance(oracle::matmul(oracle::dagger(id.vectors), id.vectors), oracle::id(2)) < 1e-12);

  const EigenDecomposition x = eigh(HermitianOperator(oracle::sx()));
  CHECK(x.values[0] == doctest::Approx(-1.0));
  CHECK(x.values[1] == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  SplitMix64 rng(5);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 32u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const HermitianOperator h = random_hermitian(rng, n);
      const EigenDecomposition e = eigh(h);
      const double scale = std::max(1.0, h.matrix().frobenius_norm());
      CHECK(reconstruction_error(h, e) <= 1e-10 * scale);
      CHECK(frobenius_distance(oracle::matmul(oracle::dagger(e.vectors), e.vectors), oracle::id(n)) <= 1e-10);
      for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] <= e.values[i]);
      // Phase convention: the largest-magnitude entry of each column is real and nonnegative.
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = 0;
        for (std::size_t r = 1; r < n; ++r)
          if (std::abs(e.vectors(r, c)) > std::abs(e.vectors(best, c)) + 1e-9) best = r;
        CHECK(std::abs(e.vectors(best, c).imag()) < 1e-9);
        CHECK(e.vectors(best, c).real() >= 0.0);
      }
    }
  }
}

TEST_CASE("eigh handles degenerate spectra") {
  SplitMix64 rng(8);
  const ComplexMatrix u = random_unitary(rng, 4);
  const double d[] = {2.0, 2.0, -1.0, -1.0};
  const HermitianOperator h(oracle::matmul(oracle::matmul(u, ComplexMatrix::diagonal(d)), oracle::dagger(u)), 1e-10);
  const EigenDecomposition e = eigh(h);
  CHECK(reconstruction_error(h, e) < 1e-10);
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(e.values[3] == doctest::Approx(2.0));
}

TEST_CASE("eigh_real diagonalizes symmetric matrices") {
  SplitMix64 rng(9);
  const std::size_t n = 7;
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = rng.normal();
  const RealEigenDecomposition e = eigh_real(a, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors[i * n + k] * e.values[k] * e.vectors[j * n + k];
      CHECK(std::abs(s - a[i * n + j]) < 1e-10);
    }
}

TEST_CASE("tensor products") {
  CHECK(oracle::max_diff(tensor(oracle::id(2), oracle::id(2)), oracle::id(4)) == 0.0);
  const double d[] = {1.0, 1.0, -1.0, -1.0};
  CHECK(oracle::max_diff(tensor(oracle::sz(), oracle::id(2)), ComplexMatrix::diagonal(d)) == 0.0);
  const ComplexMatrix t = tensor(oracle::unit(2, 0, 0), oracle::sx());
  CHECK(t(0, 1) == cplx{1.0});
  CHECK(t(1, 0) == cplx{1.0});
  CHECK(t.max_abs() == 1.0);
  CHECK(t(2, 3) == cplx{});

  SplitMix64 rng(3);
  const ComplexMatrix a = random_unitary(rng, 3), b = random_unitary(rng, 2), c = random_unitary(rng, 2);
  CHECK(oracle::max_diff(tensor(a, b), oracle::kron(a, b)) < 1e-15);
  const ComplexMatrix fs[] = {a, b, c};
  CHECK(oracle::max_diff(tensor(fs), oracle::kron(oracle::kron(a, b), c)) < 1e-14);
}

TEST_CASE("partial trace examples") {
  SplitMix64 rng(11);
  const DensityMatrix ra = random_density_matrix(rng, 2), rb = random_density_matrix(rng, 3);
  const std::size_t dims[] = {2, 3};
  const std::size_t keep_a[] = {0};
  const ComplexMatrix prod = oracle::kron(ra.matrix(), rb.matrix());
  CHECK(oracle::max_diff(partial_trace(prod, dims, keep_a), ra.matrix()) < 1e-14);

  const double r = 1.0 / std::numbers::sqrt2;
  const cplx bell[] = {r, 0.0, 0.0, r};
  const std::size_t qq[] = {2, 2};
  CHECK(oracle::max_diff(partial_trace(DensityMatrix::pure(bell).matrix(), qq, keep_a), 0.5 * oracle::id(2)) < 1e-15);

  const std::size_t bad_keep[] = {2};
  CHECK_THROWS_AS(partial_trace(prod, dims, bad_keep), DimensionError);
  const std::size_t bad_dims[] = {2, 2};
  CHECK_THROWS_AS(partial_trace(prod, bad_dims, keep_a), DimensionError);
}

TEST_CASE("partial trace keeping {1,3} of three qubits equals two-step tracing") {
  SplitMix64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix rho = random_density_matrix(rng, 8).matrix();
    const std::size_t dims[] = {2, 2, 2};
    const std::size_t keep[] = {0, 2};
    const ComplexMatrix got = partial_trace(rho, dims, keep);
    // Trace out the middle qubit by hand: indices (a b c), keep (a c).
    ComplexMatrix ref(4, 4);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
          for (std::size_t c2 = 0; c2 < 2; ++c2)
            for (std::size_t b = 0; b < 2; ++b) ref(a * 2 + c, a2 * 2 + c2) += rho(a * 4 + b * 2 + c, a2 * 4 + b * 2 + c2);
    CHECK(oracle::max_diff(got, ref) <= 1e-12);
    CHECK(std::abs(got.trace() - rho.trace()) <= 1e-12);
  }
}

TEST_CASE("partial trace is linear and adjoint to tensoring with the identity") {
  SplitMix64 rng(13);
  const std::size_t dims[] = {3, 2};
  const std::size_t keep[] = {0};
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix m = random_hermitian(rng, 6).matrix(), n = random_hermitian(rng, 6).matrix();
    const cplx alpha{rng.normal(), rng.normal()}, beta{rng.normal(), rng.normal()};
    const ComplexMatrix lhs = partial_trace(m * alpha + n * beta, dims, keep);
    const ComplexMatrix rhs = partial_trace(m, dims, keep) * alpha + partial_trace(n, dims, keep) * beta;
    CHECK(oracle::max_diff(lhs, rhs) <= 1e-12);

    const ComplexMatrix a = random_hermitian(rng, 3).matrix();
    const cplx left = oracle::trace(oracle::matmul(oracle::kron(a, oracle::id(2)), m));
    const cplx right = oracle::trace(oracle::matmul(a, partial_trace(m, dims, keep)));
    CHECK(std::abs(left - right) <= 1e-12 * std::max(1.0, std::abs(left)));
    CHECK(oracle::max_diff(partial_trace(m, dims, keep), oracle::trace_second(m, 3, 2)) <= 1e-13);
  }
}

TEST_CASE("unitary_from_hamiltonian") {
  CHECK(oracle::max_diff(unitary_from_hamiltonian(HermitianOperator(oracle::sz()), 0.0), oracle::id(2)) < 1e-15);
  const ComplexMatrix u = unitary_from_hamiltonian(HermitianOperator(oracle::sz()), std::numbers::pi / 2.0);
  CHECK(std::abs(u(0, 0) - cplx{0.0, -1.0}) < 1e-12);
  CHECK(std::abs(u(1, 1) - cplx{0.0, 1.0}) < 1e-12);
  CHECK(std::abs(u(0, 1)) < 1e-15);

  SplitMix64 rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOperator h = random_hermitian(rng, 4);
    const double t1 = rng.normal(), t2 = rng.normal();
    const ComplexMatrix u1 = unitary_from_hamiltonian(h, t1), u2 = unitary_from_hamiltonian(h, t2);
    CHECK(frobenius_distance(oracle::matmul(oracle::dagger(u1), u1), oracle::id(4)) <= 1e-10);
    CHECK(oracle::max_diff(oracle::matmul(u1, u2), unitary_from_hamiltonian(h, t1 + t2)) <= 1e-9);
  }
}

TEST_CASE("is_effect") {
  CHECK(is_effect(0.5 * HermitianOperator::identity(2)));
  CHECK_FALSE(is_effect(2.0 * HermitianOperator::identity(2)));
  const cplx zero[] = {1.0, 0.0};
  CHECK(is_effect(HermitianOperator::projector(zero)));
  CHECK_FALSE(is_effect(HermitianOperator(oracle::sz())));
}

TEST_CASE("DensityMatrix invariants") {
  CHECK_NOTHROW(DensityMatrix(HermitianOperator(0.5 * oracle::id(2))));
  CHECK_THROWS_WITH_AS(DensityMatrix(HermitianOperator(oracle::id(2))), doctest::Contains("trace"), Error);
  const ComplexMatrix bad{{1.5, 0.0}, {0.0, -0.5}};
  CHECK_THROWS_WITH_AS(DensityMatrix(HermitianOperator(bad)), doctest::Contains("min eigenvalue -0.5"), Error);
  const cplx plus[] = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  CHECK(DensityMatrix::pure(plus).is_pure());
  CHECK_FALSE(DensityMatrix::maximally_mixed(2).is_pure());
}

TEST_CASE("Hermitian coordinates are an isometry and invert") {
  SplitMix64 rng(15);
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    const ComplexMatrix a = random_hermitian(rng, d).matrix(), b = random_hermitian(rng, d).matrix();
    const std::vector<double> ca = hermitian_coordinates(a), cb = hermitian_coordinates(b);
    REQUIRE(ca.size() == d * d);
    double dot = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) dot += ca[i] * cb[i];
    CHECK(dot == doctest::Approx(oracle::trace(oracle::matmul(a, b)).real()).epsilon(1e-12));
    CHECK(oracle::max_diff(hermitian_from_coordinates(ca, d), a) < 1e-14);
  }
}

TEST_CASE("psd_projection clips negative eigenvalues") {
  const ComplexMatrix m{{1.0, 0.0}, {0.0, -2.0}};
  const HermitianOperator p = psd_projection(HermitianOperator(m));
  CHECK(oracle::max_diff(p.matrix(), oracle::unit(2, 0, 0)) < 1e-14);
}

TEST_CASE("matrix product dimension check") {
  CHECK_THROWS_AS(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), DimensionError);
}
