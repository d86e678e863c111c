// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pointer_lab/observable.hpp"
#include "pointer_lab/random.hpp"
#include "pointer_lab/scenarios.hpp"

using namespace pointer_lab;

namespace {

DiscreteObservable sigma_z() { return spectral_measure(HermitianOperator(oracle::sz())); }

double max_element_diff(const DiscreteObservable& a, const DiscreteObservable& b) {
  REQUIRE(a.outcome_count() == b.outcome_count());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.outcome_count(); ++i)
    worst = std::max(worst, oracle::max_diff(a.element(i).matrix(), b.element(i).matrix()));
  return worst;
}

StochasticMatrix random_stochastic(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> p(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < cols; ++k) s += (p[i * cols + k] = rng.uniform());
    for (std::size_t k = 0; k < cols; ++k) p[i * cols + k] /= s;
  }
  return StochasticMatrix(rows, cols, p, 1e-12);
}

std::vector<ComplexMatrix> sic_matrices(const DiscreteObservable& sic) {
  std::vector<ComplexMatrix> g;
  for (const HermitianOperator& e : sic.elements()) g.push_back(e.matrix());
  return g;
}

}  // namespace

TEST_CASE("validate_povm examples") {
  const DiscreteObservable z = validate_povm({HermitianOperator(oracle::unit(2, 0, 0)), HermitianOperator(oracle::unit(2, 1, 1))});
  CHECK(is_sharp(z));
  CHECK(z.outcome_labels() == std::vector<std::string>{"0", "1"});
  const HermitianOperator half(0.5 * oracle::id(2));
  CHECK_NOTHROW(validate_povm({half, half}));
  CHECK_THROWS_WITH_AS(validate_povm({HermitianOperator::identity(2), half}), doctest::Contains("sum to the identity"), Error);
  CHECK_THROWS_WITH_AS(validate_povm({2.0 * HermitianOperator::identity(2), -1.0 * HermitianOperator::identity(2)}),
                       doctest::Contains("not an effect"), Error);
  CHECK_THROWS_AS(validate_povm({HermitianOperator::identity(2), HermitianOperator::zero(3)}), DimensionError);
  CHECK_THROWS_AS(validate_povm({half, half}, {"only"}), Error);
}

TEST_CASE("probabilities") {
  const DensityMatrix zero(HermitianOperator(oracle::unit(2, 0, 0)));
  const std::vector<double> p = probabilities(computational_basis_measurement(2), zero);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(std::abs(p[1]) < 1e-15);
  // Spectral outcomes are ordered by ascending eigenvalue, so +1 comes last.
  const std::vector<double> q = probabilities(sigma_z(), zero);
  CHECK(std::abs(q[0]) < 1e-15);
  CHECK(q[1] == doctest::Approx(1.0));

  for (double v : probabilities(sic_povm(), DensityMatrix::maximally_mixed(2))) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

  SplitMix64 rng(1);
  const DensityMatrix rho = random_density_matrix(rng, 2);
  for (double v : probabilities(trivial_observable(2, 2), rho)) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));

  for (int rep = 0; rep < 20; ++rep) {
    const DiscreteObservable x = random_povm(rng, 3, 4);
    const DensityMatrix r = random_density_matrix(rng, 3);
    double total = 0.0;
    for (double v : probabilities(x, r)) {
      CHECK(v >= -1e-12);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("is_sharp") {
  CHECK(is_sharp(sigma_z()));
  CHECK_FALSE(is_sharp(sic_povm()));
  CHECK(is_sharp(validate_povm({HermitianOperator::identity(2)})));
}

TEST_CASE("spectral_measure groups degenerate eigenvalues") {
  const double d[] = {1.0, 1.0, -1.0};
  const DiscreteObservable x = spectral_measure(HermitianOperator(ComplexMatrix::diagonal(d)));
  CHECK(x.outcome_count() == 2);
  CHECK(is_sharp(x));
}

TEST_CASE("StochasticMatrix validation") {
  CHECK_THROWS_AS(StochasticMatrix(2, 2, {0.5, 0.6, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(StochasticMatrix(1, 2, {1.2, -0.2}), Error);
  CHECK_THROWS_AS(StochasticMatrix(2, 2, {1.0}), DimensionError);
}

TEST_CASE("coarse_grain examples") {
  const DiscreteObservable sic = sic_povm();
  CHECK(max_element_diff(coarse_grain(sic, StochasticMatrix::identity(4)), sic) < 1e-15);

  const StochasticMatrix merge(4, 2, {1, 0, 1, 0, 0, 1, 0, 1});
  const DiscreteObservable m = coarse_grain(sic, merge);
  CHECK(oracle::max_diff(m.element(0).matrix(), sic.element(0).matrix() + sic.element(1).matrix()) < 1e-15);
  CHECK(oracle::max_diff(m.element(1).matrix(), sic.element(2).matrix() + sic.element(3).matrix()) < 1e-15);

  const DiscreteObservable flat = coarse_grain(sic, StochasticMatrix::uniform(4, 3));
  for (const HermitianOperator& e : flat.elements()) CHECK(oracle::max_diff(e.matrix(), oracle::id(2) * cplx{1.0 / 3.0}) < 1e-15);

  CHECK_THROWS_AS(coarse_grain(sic, StochasticMatrix::identity(3)), DimensionError);
}

TEST_CASE("coarse-graining composition law") {
  SplitMix64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const DiscreteObservable g = random_povm(rng, 3, 4);
    const StochasticMatrix p = random_stochastic(rng, 4, 3), q = random_stochastic(rng, 3, 2);
    CHECK(max_element_diff(coarse_grain(coarse_grain(g, p), q), coarse_grain(g, p * q)) <= 1e-12);
  }
}

TEST_CASE("pullback examples") {
  SplitMix64 rng(3);
  const DiscreteObservable y = random_povm(rng, 2, 3);
  CHECK(max_element_diff(pullback(y, QuantumChannel::identity(2)), y) < 1e-15);
  CHECK(max_element_diff(pullback(sigma_z(), QuantumChannel::complete_dephasing(2)), sigma_z()) < 1e-15);

  const DiscreteObservable sic = sic_povm();
  const DiscreteObservable x = pullback(sic, cloning_channel());
  for (std::size_t i = 0; i < 4; ++i) {
    const ComplexMatrix expected = sic.element(i).matrix() * cplx{1.0 / 3.0} + oracle::id(2) * cplx{1.0 / 6.0};
    CHECK(oracle::max_diff(x.element(i).matrix(), expected) < 1e-14);
  }
  CHECK_THROWS_AS(pullback(y, QuantumChannel::identity(3)), DimensionError);
}

TEST_CASE("pullback functoriality and normalization closure") {
  SplitMix64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const QuantumChannel n = random_channel(rng, 2, 3, 2), m = random_channel(rng, 3, 2, 2);
    const DiscreteObservable y = random_povm(rng, 2, 3);
    const DiscreteObservable a = pullback(y, compose(m, n));
    CHECK(max_element_diff(a, pullback(pullback(y, m), n)) <= 1e-10);
    CHECK(a.normalization_residual() <= 1e-10);
    CHECK(coarse_grain(a, random_stochastic(rng, 3, 2)).normalization_residual() <= 1e-10);
  }
}

TEST_CASE("coarse_graining_witness examples") {
  const DiscreteObservable sic = sic_povm();
  const CoarseGrainingResult self = coarse_graining_witness(sic, sic);
  REQUIRE(self.feasible);
  CHECK(self.direct_solve);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) CHECK((*self.matrix)(i, k) == doctest::Approx(i == k ? 1.0 : 0.0));

  const StochasticMatrix merge(4, 2, {1, 0, 1, 0, 0, 1, 0, 1});
  const CoarseGrainingResult m = coarse_graining_witness(coarse_grain(sic, merge), sic);
  REQUIRE(m.feasible);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs((*m.matrix)(i, k) - merge(i, k)) < 1e-12);

  // sigma_z from the SIC: the linear-solve oracle finds a coefficient above 1.
  const CoarseGrainingResult z = coarse_graining_witness(sigma_z(), sic);
  CHECK_FALSE(z.feasible);
  CHECK(z.residual > 1e-3);
  const std::vector<double> alpha = oracle::qubit_expansion(sic_matrices(sic), oracle::unit(2, 0, 0));
  CHECK(*std::max_element(alpha.begin(), alpha.end()) > 1.0);
}

TEST_CASE("coarse_graining_witness with linearly dependent elements") {
  // Six elements on a qubit span at most four dimensions, so the projection path is used.
  SplitMix64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const DiscreteObservable g = random_povm(rng, 2, 6);
    const StochasticMatrix p = random_stochastic(rng, 6, 3);
    const DiscreteObservable x = coarse_grain(g, p);
    const CoarseGrainingResult r = coarse_graining_witness(x, g);
    REQUIRE(r.feasible);
    CHECK_FALSE(r.direct_solve);
    // Witness soundness: reconstruct X from (Gamma, p).
    const DiscreteObservable back = coarse_grain(g, *r.matrix);
    CHECK(max_element_diff(back, x) <= 1e-8);
  }
}

TEST_CASE("convex combinations of coarse-grainings remain coarse-grainings") {
  SplitMix64 rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const DiscreteObservable g = random_povm(rng, 2, 4);
    const StochasticMatrix p = random_stochastic(rng, 4, 2), q = random_stochastic(rng, 4, 2);
    const double w = rng.uniform();
    std::vector<double> mix(8);
    for (std::size_t i = 0; i < 8; ++i) mix[i] = w * p.entries()[i] + (1 - w) * q.entries()[i];
    const StochasticMatrix pq(4, 2, mix, 1e-12);
    const DiscreteObservable x = coarse_grain(g, pq);
    const CoarseGrainingResult r = coarse_graining_witness(x, g);
    REQUIRE(r.feasible);
    CHECK(max_element_diff(coarse_grain(g, *r.matrix), x) <= 1e-8);
  }
}

TEST_CASE("simplex_coefficients") {
  const DiscreteObservable sic = sic_povm();
  const SimplexCoefficients one = simplex_coefficients(HermitianOperator::identity(2), sic);
  for (double a : one.alpha) CHECK(a == doctest::Approx(1.0));
  CHECK(one.inside);

  const HermitianOperator a = adjoint_apply(cloning_channel(), HermitianOperator(oracle::unit(2, 0, 0)));
  const SimplexCoefficients sc = simplex_coefficients(a, sic);
  const std::vector<double> ref = oracle::qubit_expansion(sic_matrices(sic), oracle::id(2) * cplx{0.5} + oracle::sz() * cplx{1.0 / 6.0});
  CHECK(sc.alpha[0] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < 4; ++i) CHECK(sc.alpha[i] == doctest::Approx(1.0 / 3.0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(sc.alpha[i] == doctest::Approx(ref[i]));
  CHECK(sc.inside);

  const SimplexCoefficients out = simplex_coefficients(HermitianOperator(oracle::unit(2, 0, 0)), sic);
  CHECK_FALSE(out.inside);
  CHECK(*std::max_element(out.alpha.begin(), out.alpha.end()) > 1.0);

  SplitMix64 rng(1);
  CHECK_THROWS_AS(simplex_coefficients(HermitianOperator::identity(2), random_povm(rng, 2, 6)), Error);
}
