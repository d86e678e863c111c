// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/preservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointer_lab/dykstra.hpp"

namespace pointer_lab {

void SolverOptions::validate() const {
  if (!(eps_feas > 0.0)) throw Error("solver.eps_feas must be positive");
  if (!(eps_infeas > 0.0)) throw Error("solver.eps_infeas must be positive");
  if (!(eps_feas < eps_infeas)) throw Error("solver.eps_feas must be smaller than solver.eps_infeas");
  if (max_iter < 1) throw Error("solver.max_iter must be at least 1");
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::feasible:
      return "feasible";
    case VerdictStatus::infeasible:
      return "infeasible";
    case VerdictStatus::undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

// Matrix of B -> N*(B) in orthonormal Hermitian coordinates
// (dim_in^2 rows, dim_out^2 columns).
std::vector<double> adjoint_coordinate_matrix(const QuantumChannel& n) {
  const std::size_t di2 = n.dim_in() * n.dim_in();
  const std::size_t do2 = n.dim_out() * n.dim_out();
  std::vector<double> m(di2 * do2, 0.0);
  std::vector<double> unit(do2, 0.0);
  std::vector<double> col(di2);
  for (std::size_t j = 0; j < do2; ++j) {
    unit.assign(do2, 0.0);
    unit[j] = 1.0;
    const ComplexMatrix bj = hermitian_from_coordinates(unit, n.dim_out());
    hermitian_coordinates(adjoint_apply(n, bj), col);
    for (std::size_t r = 0; r < di2; ++r) m[r * do2 + j] = col[r];
  }
  return m;
}

void project_psd_block(std::span<double> coords, std::size_t d) {
  const HermitianOperator h(hermitian_from_coordinates(coords, d));
  const EigenDecomposition e = eigh(h);
  if (e.values.front() >= 0.0) return;
  ComplexMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = e.values[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const cplx vik = e.vectors(i, k) * lam;
      for (std::size_t j = 0; j < d; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  hermitian_coordinates(out, coords);
}

std::vector<HermitianOperator> blocks_to_operators(std::span<const double> v, std::size_t k, std::size_t d) {
  std::vector<HermitianOperator> out;
  const std::size_t d2 = d * d;
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(hermitian_from_coordinates(v.subspan(i * d2, d2), d));
  }
  return out;
}

}  // namespace

PreservationVerdict preservation_witness(const DiscreteObservable& x, const QuantumChannel& n,
                                         const SolverOptions& opts) {
  opts.validate();
  if (x.dim() != n.dim_in()) {
    throw DimensionError("observable dimension " + std::to_string(x.dim()) +
                         " does not match channel input " + std::to_string(n.dim_in()));
  }
  const std::size_t k = x.outcome_count();
  const std::size_t di2 = n.dim_in() * n.dim_in();
  const std::size_t dout = n.dim_out();
  const std::size_t do2 = dout * dout;
  const std::size_t nvar = k * do2;
  const std::size_t neq = k * di2 + do2;

  // Stacked equality constraints: N*(Y_i) = X_i for each i, sum_i Y_i = 1.
  const std::vector<double> nstar = adjoint_coordinate_matrix(n);
  std::vector<double> a(neq * nvar, 0.0);
  std::vector<double> b(neq, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double> xc = hermitian_coordinates(x.element(i).matrix());
    for (std::size_t r = 0; r < di2; ++r) {
      const std::size_t row = i * di2 + r;
      b[row] = xc[r];
      std::copy_n(nstar.data() + r * do2, do2, a.data() + row * nvar + i * do2);
    }
  }
  const std::vector<double> id_out = hermitian_coordinates(ComplexMatrix::identity(dout));
  for (std::size_t r = 0; r < do2; ++r) {
    const std::size_t row = k * di2 + r;
    b[row] = id_out[r];
    for (std::size_t i = 0; i < k; ++i) a[row * nvar + i * do2 + r] = 1.0;
  }
  const AffineProjector affine(std::move(a), neq, nvar, std::move(b));

  std::vector<double> start(nvar);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < do2; ++r) start[i * do2 + r] = id_out[r] / static_cast<double>(k);
  }

  DykstraOptions dopts;
  dopts.target = 0.01 * opts.eps_feas;
  dopts.max_iter = opts.max_iter;
  dopts.record_trace = opts.record_trace;
  const DykstraResult dr = dykstra(
      affine,
      [k, dout, do2](std::span<double> v) {
        for (std::size_t i = 0; i < k; ++i) project_psd_block(v.subspan(i * do2, do2), dout);
      },
      std::move(start), dopts);

  PreservationVerdict verdict;
  verdict.iterations = dr.iterations;
  verdict.residual = dr.best_residual;
  verdict.equality_inconsistency = affine.inconsistency();
  verdict.trace = dr.trace;
  verdict.affine_iterate = blocks_to_operators(dr.best_affine, k, dout);
  verdict.affine_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const HermitianOperator& h : verdict.affine_iterate) {
    verdict.affine_min_eigenvalue = std::min(verdict.affine_min_eigenvalue, min_eigenvalue(h));
  }

  if (dr.best_residual <= opts.eps_feas) {
    // Restore exact normalization: Y_i -> S^{-1/2} Y_i S^{-1/2}, S = sum_i Y_i.
    std::vector<HermitianOperator> ys = blocks_to_operators(dr.best_point, k, dout);
    HermitianOperator s = HermitianOperator::zero(dout);
    for (const HermitianOperator& y : ys) s = s + y;
    if (min_eigenvalue(s) > 0.5) {
      const ComplexMatrix s_inv_half =
          spectral_function(s, [](double v) { return 1.0 / std::sqrt(v); }).matrix();
      std::vector<double> coords(nvar);
      for (std::size_t i = 0; i < k; ++i) {
        ys[i] = HermitianOperator(s_inv_half * ys[i].matrix() * s_inv_half, 1e-10);
        hermitian_coordinates(ys[i].matrix(), std::span<double>(coords).subspan(i * do2, do2));
      }
      const double polished = affine.residual(coords);
      if (polished <= opts.eps_feas) {
        try {
          verdict.witness = validate_povm(std::move(ys), x.outcome_labels());
          verdict.status = VerdictStatus::feasible;
          verdict.residual = polished;
          return verdict;
        } catch (const Error&) {
          // fall through to undecided
        }
      }
    }
  }
  verdict.status = dr.best_residual >= opts.eps_infeas ? VerdictStatus::infeasible
                                                       : VerdictStatus::undecided;
  return verdict;
}

std::vector<bool> sharp_correctability_check(std::span<const HermitianOperator> projectors,
                                             const QuantumChannel& n, double tol) {
  std::vector<ComplexMatrix> ede;
  for (const ComplexMatrix& e : n.kraus()) ede.push_back(e.adjoint() * e);
  std::vector<bool> out;
  for (std::size_t p = 0; p < projectors.size(); ++p) {
    const ComplexMatrix& pm = projectors[p].matrix();
    if (pm.rows() != n.dim_in()) {
      throw DimensionError("projector " + std::to_string(p) + " does not act on the channel input");
    }
    if (frobenius_distance(pm * pm, pm) > tol_recon) {
      throw Error("operator " + std::to_string(p) + " is not a projector");
    }
    bool ok = true;
    for (const ComplexMatrix& f : ede) {
      if (frobenius_distance(pm * f, f * pm) > tol) {
        ok = false;
        break;
      }
    }
    out.push_back(ok);
  }
  return out;
}

IntersectionResult in_intersection(const DiscreteObservable& x, std::span<const QuantumChannel> channels,
                                   const SolverOptions& opts) {
  IntersectionResult res;
  for (const QuantumChannel& c : channels) {
    if (c.dim_in() != x.dim()) throw DimensionError("channel input does not match the observable");
  }
  for (const QuantumChannel& c : channels) {
    res.verdicts.push_back(preservation_witness(x, c, opts));
    if (res.verdicts.back().status == VerdictStatus::feasible) ++res.feasible_count;
  }
  res.in_intersection = !channels.empty() && res.feasible_count == channels.size();
  return res;
}

DiscreteObservable joint_pointer_observable(std::span<const DiscreteObservable> witnesses,
                                            const BroadcastModel& model) {
  const std::size_t nf = model.fragment_count();
  if (witnesses.size() != nf) {
    throw DimensionError("need one witness per fragment (" + std::to_string(nf) + "), got " +
                         std::to_string(witnesses.size()));
  }
  std::size_t total = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    if (witnesses[f].dim() != model.fragment_dims()[f]) {
      throw DimensionError("witness " + std::to_string(f) + " acts on dimension " +
                           std::to_string(witnesses[f].dim()) + ", fragment has " +
                           std::to_string(model.fragment_dims()[f]));
    }
    total *= witnesses[f].outcome_count();
    if (total > kMaxJointOutcomes) throw Error("joint pointer observable exceeds 10^6 outcomes");
  }

  std::vector<HermitianOperator> elements;
  std::vector<std::string> labels;
  elements.reserve(total);
  std::vector<std::size_t> idx(nf, 0);
  for (std::size_t o = 0; o < total; ++o) {
    std::size_t rem = o;
    for (std::size_t f = nf; f-- > 0;) {
      idx[f] = rem % witnesses[f].outcome_count();
      rem /= witnesses[f].outcome_count();
    }
    ComplexMatrix op = witnesses[0].element(idx[0]).matrix();
    std::string label = witnesses[0].outcome_labels()[idx[0]];
    for (std::size_t f = 1; f < nf; ++f) {
      op = tensor(op, witnesses[f].element(idx[f]).matrix());
      label += "," + witnesses[f].outcome_labels()[idx[f]];
    }
    elements.emplace_back(adjoint_apply(model.joint(), op), 1e-9);
    labels.push_back(std::move(label));
  }
  return validate_povm(std::move(elements), std::move(labels), 1e-8);
}

DiscreteObservable joint_marginal(const DiscreteObservable& gamma,
                                  std::span<const std::size_t> outcome_counts, std::size_t fragment) {
  if (fragment >= outcome_counts.size()) throw DimensionError("fragment index out of range");
  std::size_t total = 1;
  for (std::size_t c : outcome_counts) total *= c;
  if (total != gamma.outcome_count()) throw DimensionError("outcome counts do not match the observable");
  std::size_t stride = 1;
  for (std::size_t f = fragment + 1; f < outcome_counts.size(); ++f) stride *= outcome_counts[f];
  const std::size_t kf = outcome_counts[fragment];

  std::vector<ComplexMatrix> sums(kf, ComplexMatrix(gamma.dim(), gamma.dim()));
  for (std::size_t o = 0; o < total; ++o) sums[(o / stride) % kf] += gamma.element(o).matrix();
  std::vector<HermitianOperator> els;
  for (const ComplexMatrix& s : sums) els.emplace_back(s, 1e-9);
  return validate_povm(std::move(els), {}, 1e-8);
}

std::vector<double> marginal_consistency_residuals(const DiscreteObservable& gamma,
                                                   std::span<const DiscreteObservable> witnesses,
                                                   const BroadcastModel& model) {
  std::vector<std::size_t> counts;
  for (const DiscreteObservable& w : witnesses) counts.push_back(w.outcome_count());
  std::vector<double> out;
  for (std::size_t f = 0; f < witnesses.size(); ++f) {
    const DiscreteObservable m = joint_marginal(gamma, counts, f);
    const DiscreteObservable x = pullback(witnesses[f], marginal(model, f));
    double worst = 0.0;
    for (std::size_t a = 0; a < m.outcome_count(); ++a) {
      worst = std::max(worst, frobenius_distance(m.element(a).matrix(), x.element(a).matrix()));
    }
    out.push_back(worst);
  }
  return out;
}

std::vector<std::vector<double>> correlation_matrix(const BroadcastModel& model, std::size_t i,
                                                    std::size_t j, const DiscreteObservable& y,
                                                    const DiscreteObservable& z,
                                                    const DensityMatrix& rho) {
  const std::size_t nf = model.fragment_count();
  if (i >= nf || j >= nf) throw DimensionError("fragment index out of range");
  if (i == j) throw Error("correlation needs two distinct fragments");
  if (y.dim() != model.fragment_dims()[i] || z.dim() != model.fragment_dims()[j]) {
    throw DimensionError("readout observables do not match the fragment dimensions");
  }
  if (rho.dim() != model.dim_in()) throw DimensionError("input state dimension mismatch");

  const ComplexMatrix out = apply(model.joint(), rho.matrix());
  const std::size_t keep[] = {std::min(i, j), std::max(i, j)};
  const ComplexMatrix pair = partial_trace(out, model.fragment_dims(), keep);

  std::vector<std::vector<double>> c(y.outcome_count(), std::vector<double>(z.outcome_count()));
  for (std::size_t a = 0; a < y.outcome_count(); ++a)
    for (std::size_t bb = 0; bb < z.outcome_count(); ++bb) {
      const ComplexMatrix op = i < j ? tensor(y.element(a).matrix(), z.element(bb).matrix())
                                     : tensor(z.element(bb).matrix(), y.element(a).matrix());
      c[a][bb] = trace_of_product(pair, op).real();
    }
  return c;
}

}  // namespace pointer_lab
