// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pointer_lab/random.hpp"
#include "pointer_lab/scenarios.hpp"

using namespace pointer_lab;
using std::numbers::pi;

namespace {

CanonicalModelSpec spec_with(std::size_t n, double t) {
  CanonicalModelSpec s;
  s.couplings.assign(n, 1.0);
  s.t = t;
  return s;
}

DiscreteObservable sharp_of(const ComplexMatrix& m) { return spectral_measure(HermitianOperator(m)); }

// The unsharp coarse-graining of sigma_z with confusion probability q.
DiscreteObservable noisy_z(double q) {
  return coarse_grain(computational_basis_measurement(2), StochasticMatrix(2, 2, {1 - q, q, q, 1 - q}));
}

}  // namespace

TEST_CASE("canonical model structure") {
  const BroadcastModel m = canonical_model(spec_with(3, 0.3));
  CHECK(m.fragment_count() == 4);
  CHECK(m.labels() == std::vector<std::string>{"A", "E1", "E2", "E3"});
  CHECK(m.fragment_dims() == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(m.joint().trace_preservation_defect() < 1e-12);
  CHECK(is_unitary(canonical_unitary(spec_with(3, 0.3))));
}

TEST_CASE("canonical unitary matches a direct exponential") {
  // For J = sigma_z, K = sigma_z the Hamiltonian is diagonal with entries
  // (+-1) * sum_i g_i (+-1).
  CanonicalModelSpec s = spec_with(2, 0.7);
  s.couplings = {0.5, 1.5};
  const ComplexMatrix u = canonical_unitary(s);
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const double js = (idx & 4) ? -1.0 : 1.0;
    const double e = js * (0.5 * ((idx & 2) ? -1.0 : 1.0) + 1.5 * ((idx & 1) ? -1.0 : 1.0));
    CHECK(std::abs(u(idx, idx) - std::polar(1.0, -s.t * e)) < 1e-13);
  }
}

TEST_CASE("identity J gives the identity system marginal") {
  CanonicalModelSpec s = spec_with(2, 1.1);
  s.j = HermitianOperator::identity(2);
  const QuantumChannel a = marginal(canonical_model(s), 0);
  SplitMix64 rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix rho = random_density_matrix(rng, 2);
    CHECK(oracle::max_diff(apply(a, rho.matrix()), rho.matrix()) < 1e-12);
  }
}

TEST_CASE("at t = pi/4 the system marginal is complete dephasing") {
  const QuantumChannel a = marginal(canonical_model(spec_with(4, pi / 4)), 0);
  SplitMix64 rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix rho = random_density_matrix(rng, 2).matrix();
    ComplexMatrix diag(2, 2);
    diag(0, 0) = rho(0, 0);
    diag(1, 1) = rho(1, 1);
    CHECK(oracle::max_diff(apply(a, rho), diag) < 1e-12);
  }
}

TEST_CASE("decoherence factor equals the product of cosines") {
  for (std::size_t n : {1u, 2u, 4u}) {
    for (int k = 0; k <= 20; ++k) {
      const double t = k * pi / 40;
      const CanonicalModelSpec s = spec_with(n, t);
      const double expected = std::pow(std::abs(std::cos(2 * t)), static_cast<double>(n));
      CHECK(std::abs(decoherence_factor(s) - expected) <= 1e-10);
      CHECK(std::abs(decoherence_factor_product(s) - expected) <= 1e-12);
    }
  }
  CHECK(decoherence_factor(spec_with(1, pi / 8)) == doctest::Approx(std::cos(pi / 4)));

  CanonicalModelSpec g = spec_with(3, 0.4);
  g.couplings = {0.3, 1.0, 2.2};
  double expected = 1.0;
  for (double c : g.couplings) expected *= std::abs(std::cos(2 * c * g.t));
  CHECK(decoherence_factor(g) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("canonical spec validation") {
  CanonicalModelSpec s;
  s.couplings.clear();
  CHECK_THROWS_AS(s.validate(), Error);
  s = CanonicalModelSpec{};
  s.env_initial = {DensityMatrix::maximally_mixed(2), plus_state(), plus_state(), plus_state()};
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("not a pure state"), Error);
  s = CanonicalModelSpec{};
  s.k = HermitianOperator::identity(3);
  CHECK_THROWS_AS(s.validate(), DimensionError);
  s = CanonicalModelSpec{};
  s.couplings.assign(10, 1.0);
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("cloning channel shrinks the Bloch vector by 1/3") {
  SplitMix64 rng(3);
  const QuantumChannel c = cloning_channel();
  for (int rep = 0; rep < 10; ++rep) {
    const double x = rng.normal(), y = rng.normal(), z = rng.normal();
    const double r = std::sqrt(x * x + y * y + z * z) / rng.uniform();
    const ComplexMatrix out = apply(c, oracle::bloch_state(x / r, y / r, z / r));
    CHECK(oracle::max_diff(out, oracle::bloch_state(x / (3 * r), y / (3 * r), z / (3 * r))) < 1e-14);
  }
}

TEST_CASE("SIC POVM geometry") {
  SplitMix64 rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const std::array<double, 3> o = {rng.normal(), rng.normal(), rng.normal()};
    const DiscreteObservable sic = sic_povm(o);
    const auto v = tetrahedron(o);
    const double on = std::sqrt(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]);
    for (std::size_t a = 0; a < 3; ++a) CHECK(v[0][a] == doctest::Approx(o[a] / on));
    for (std::size_t i = 0; i < 4; ++i) {
      const ComplexMatrix gi = sic.element(i).matrix();
      // 2 Gamma_i is a rank-one projector.
      const ComplexMatrix p = gi * cplx{2.0};
      CHECK(oracle::max_diff(oracle::matmul(p, p), p) < 1e-14);
      for (std::size_t j = 0; j < 4; ++j) {
        const double dot = v[i][0] * v[j][0] + v[i][1] * v[j][1] + v[i][2] * v[j][2];
        CHECK(dot == doctest::Approx(i == j ? 1.0 : -1.0 / 3.0));
        const double tr = oracle::trace(oracle::matmul(gi, sic.element(j).matrix())).real();
        CHECK(tr == doctest::Approx((1 + dot) / 8));
      }
    }
  }
  CHECK_NOTHROW(sic_povm({0.0, 0.0, -1.0}));
  CHECK_THROWS_WITH_AS(sic_povm({0.0, 0.0, 0.0}), doctest::Contains("nonzero"), Error);
}

TEST_CASE("containment of the cloning channel's image in the SIC simplex") {
  const ContainmentReport r = containment_check(cloning_channel(), sic_povm(), 500, 11);
  CHECK(r.pass);
  CHECK(r.samples == 508);
  CHECK(r.worst_margin >= -1e-10);
  // The identity channel maps rank-one projectors outside.
  CHECK_FALSE(containment_check(QuantumChannel::identity(2), sic_povm(), 10, 11).pass);
}

TEST_CASE("pullbacks through cloning are coarse-grainings of the SIC") {
  SplitMix64 rng(5);
  const DiscreteObservable sic = sic_povm({1.0, 2.0, 0.5});
  for (int rep = 0; rep < 20; ++rep) {
    const DiscreteObservable y = random_povm(rng, 2, 2 + rng.below(4));
    const DiscreteObservable x = pullback(y, cloning_channel());
    const CoarseGrainingResult w = coarse_graining_witness(x, sic);
    REQUIRE(w.feasible);
    for (std::size_t k = 0; k < x.outcome_count(); ++k) {
      ComplexMatrix sum(2, 2);
      for (std::size_t i = 0; i < 4; ++i) sum += sic.element(i).matrix() * cplx{(*w.matrix)(i, k)};
      CHECK(oracle::max_diff(sum, x.element(k).matrix()) < 1e-8);
    }
  }
}

TEST_CASE("measurement copy channel outputs") {
  SplitMix64 rng(6);
  const DiscreteObservable g = random_povm(rng, 2, 3);
  const BroadcastModel m = measurement_copy_channel(g, 2);
  CHECK(m.fragment_dims() == std::vector<std::size_t>{3, 3});
  CHECK(m.labels() == std::vector<std::string>{"R1", "R2"});
  const DensityMatrix rho = random_density_matrix(rng, 2);
  const ComplexMatrix out = apply(m.joint(), rho.matrix());
  const std::vector<double> p = probabilities(g, rho);
  ComplexMatrix expected(9, 9);
  for (std::size_t x = 0; x < 3; ++x) expected(x * 3 + x, x * 3 + x) = p[x];
  CHECK(oracle::max_diff(out, expected) < 1e-13);
  CHECK_THROWS_AS(measurement_copy_channel(g, 0), Error);
}

TEST_CASE("redundancy report examples") {
  const SolverOptions opts;
  const BroadcastModel m = canonical_model(spec_with(3, pi / 4));
  const RedundancyReport triv = redundancy_report(m, trivial_observable(2, 3), opts);
  CHECK(triv.redundancy == 4);
  REQUIRE(triv.fragments.size() == 4);
  CHECK(triv.fragments[0].label == "A");
  CHECK(triv.fragments[3].label == "E3");

  const RedundancyReport z = redundancy_report(m, computational_basis_measurement(2), opts, 0.0, pi / 4);
  CHECK(z.redundancy == 4);
  CHECK(z.time == doctest::Approx(pi / 4));
  CHECK(z.decoherence_factor == doctest::Approx(0.0));

  const RedundancyReport x = redundancy_report(m, sharp_of(oracle::sx()), opts);
  CHECK(x.redundancy == 0);

  // Before any interaction only the system carries sigma_z.
  const RedundancyReport z0 = redundancy_report(canonical_model(spec_with(3, 0.0)), computational_basis_measurement(2), opts);
  CHECK(z0.redundancy == 1);
  CHECK(z0.fragments[1].verdict.status == VerdictStatus::infeasible);
  CHECK(z0.fragments[1].verdict.residual >= 1e-3);
}

TEST_CASE("coarse-graining never lowers redundancy") {
  const SolverOptions opts;
  for (double t : {0.1, 0.3, pi / 4}) {
    const BroadcastModel m = canonical_model(spec_with(2, t));
    const std::size_t sharp = redundancy_report(m, computational_basis_measurement(2), opts).redundancy;
    for (double q : {0.1, 0.3, 0.5}) CHECK(redundancy_report(m, noisy_z(q), opts).redundancy >= sharp);
  }
}

TEST_CASE("observables broadcast to every fragment are coarse-grainings of the pointer measure") {
  const SolverOptions opts;
  SplitMix64 rng(7);
  const DiscreteObservable pj = computational_basis_measurement(2);
  std::size_t broadcast = 0;
  for (double t : {0.2, 0.5, pi / 4}) {
    const BroadcastModel m = canonical_model(spec_with(2, t));
    std::vector<DiscreteObservable> candidates = {noisy_z(0.2), noisy_z(0.4), sharp_of(oracle::sx()),
                                                  random_povm(rng, 2, 3)};
    for (const DiscreteObservable& x : candidates) {
      const RedundancyReport r = redundancy_report(m, x, opts);
      if (r.redundancy == m.fragment_count()) {
        ++broadcast;
        CHECK(coarse_graining_witness(x, pj).feasible);
      }
    }
  }
  CHECK(broadcast >= 3);
}

TEST_CASE("degenerate J on a qutrit keeps coherence inside the degenerate block") {
  CanonicalModelSpec s;
  const double d[] = {1.0, 1.0, -1.0};
  s.j = HermitianOperator(ComplexMatrix::diagonal(d));
  s.couplings = {1.0, 1.0, 1.0};
  s.t = pi / 4;
  const BroadcastModel m = canonical_model(s);

  const double h = 1.0 / std::numbers::sqrt2;
  const std::vector<cplx> plus = {h, h, 0.0}, minus = {h, -h, 0.0};
  const DiscreteObservable target = validate_povm({HermitianOperator::projector(plus), HermitianOperator::projector(minus),
                                                   HermitianOperator::projector(basis_vector(3, 2))});
  const RedundancyReport r = redundancy_report(m, target, SolverOptions{});
  CHECK(r.fragments[0].verdict.status == VerdictStatus::feasible);
  CHECK(r.redundancy == 1);
  CHECK_FALSE(coarse_graining_witness(target, spectral_measure(s.j)).feasible);

  const RedundancyReport pj = redundancy_report(m, spectral_measure(s.j), SolverOptions{});
  CHECK(pj.redundancy == 4);
}

TEST_CASE("all_marginals") {
  const BroadcastModel m = canonical_model(spec_with(2, 0.3));
  const std::vector<QuantumChannel> ms = all_marginals(m);
  REQUIRE(ms.size() == 3);
  for (const QuantumChannel& c : ms) {
    CHECK(c.dim_in() == 2);
    CHECK(c.dim_out() == 2);
    CHECK(c.trace_preservation_defect() < 1e-10);
  }
}

TEST_CASE("sharp pointer redundancy is nondecreasing in t") {
  const SolverOptions opts;
  std::size_t previous = 0;
  std::vector<std::size_t> seen;
  for (double t : {0.0, pi / 16, pi / 8, pi / 4}) {
    const std::size_t r = redundancy_report(canonical_model(spec_with(4, t)), computational_basis_measurement(2), opts).redundancy;
    CHECK(r >= previous);
    previous = r;
    seen.push_back(r);
  }
  CHECK(seen.front() == 1);
  CHECK(seen.back() == 5);
}

TEST_CASE("measurement copy correlations are diagonal") {
  SplitMix64 rng(8);
  const DiscreteObservable z = computational_basis_measurement(3);
  const BroadcastModel m = measurement_copy_channel(z, 3);
  const DiscreteObservable readout = computational_basis_measurement(3);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(rng, 3);
    const std::vector<double> p = probabilities(z, rho);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto c = correlation_matrix(m, i, j, readout, readout, rho);
        for (std::size_t a = 0; a < 3; ++a)
          for (std::size_t b = 0; b < 3; ++b) CHECK(std::abs(c[a][b] - (a == b ? p[a] : 0.0)) <= 1e-12);
      }
  }
}
