// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/observable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointer_lab/dykstra.hpp"

namespace pointer_lab {

namespace {

constexpr double kIndependenceThreshold = 1e-10;
constexpr double kBoxSlack = 1e-10;

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

struct Gram {
  std::size_t n = 0;
  std::vector<double> g;  // Tr(Gamma_i Gamma_j)
  RealEigenDecomposition eig;
};

Gram gram_of(const DiscreteObservable& gamma) {
  Gram gr;
  gr.n = gamma.outcome_count();
  gr.g.assign(gr.n * gr.n, 0.0);
  for (std::size_t i = 0; i < gr.n; ++i)
    for (std::size_t j = i; j < gr.n; ++j) {
      const double v = inner(gamma.element(i).matrix(), gamma.element(j).matrix()).real();
      gr.g[i * gr.n + j] = v;
      gr.g[j * gr.n + i] = v;
    }
  gr.eig = eigh_real(gr.g, gr.n);
  return gr;
}

// alpha = G^{-1} r through the eigendecomposition of G.
std::vector<double> gram_solve(const Gram& gr, std::span<const double> r) {
  const std::size_t n = gr.n;
  std::vector<double> alpha(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += gr.eig.vectors[i * n + k] * r[i];
    proj /= gr.eig.values[k];
    for (std::size_t i = 0; i < n; ++i) alpha[i] += gr.eig.vectors[i * n + k] * proj;
  }
  return alpha;
}

ComplexMatrix combination(const DiscreteObservable& gamma, std::span<const double> alpha) {
  ComplexMatrix out(gamma.dim(), gamma.dim());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    out += gamma.element(i).matrix() * cplx{alpha[i]};
  }
  return out;
}

// sqrt(sum_k ||sum_i p(i,k) Gamma_i - X_k||_F^2) for a row-major p.
double coarse_graining_residual(const DiscreteObservable& x, const DiscreteObservable& gamma,
                                std::span<const double> p) {
  const std::size_t ns = gamma.outcome_count();
  const std::size_t nt = x.outcome_count();
  double s = 0.0;
  std::vector<double> col(ns);
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t i = 0; i < ns; ++i) col[i] = p[i * nt + k];
    const double d = frobenius_distance(combination(gamma, col), x.element(k).matrix());
    s += d * d;
  }
  return std::sqrt(s);
}

// Clamp into [0, 1] and renormalize each row.
std::vector<double> polish_stochastic(std::vector<double> p, std::size_t rows, std::size_t cols) {
  for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < cols; ++k) s += p[i * cols + k];
    for (std::size_t k = 0; k < cols; ++k) {
      p[i * cols + k] = s > 0.0 ? p[i * cols + k] / s : 1.0 / static_cast<double>(cols);
    }
  }
  return p;
}

CoarseGrainingResult coarse_graining_by_projection(const DiscreteObservable& x,
                                                   const DiscreteObservable& gamma, double eps,
                                                   int max_iter) {
  const std::size_t ns = gamma.outcome_count();
  const std::size_t nt = x.outcome_count();
  const std::size_t d = gamma.dim();
  const std::size_t d2 = d * d;
  const std::size_t nvar = ns * nt;
  const std::size_t neq = nt * d2 + ns;

  std::vector<std::vector<double>> gcoords;
  for (const HermitianOperator& g : gamma.elements()) gcoords.push_back(hermitian_coordinates(g.matrix()));

  std::vector<double> a(neq * nvar, 0.0);
  std::vector<double> b(neq, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    const std::vector<double> xc = hermitian_coordinates(x.element(k).matrix());
    for (std::size_t r = 0; r < d2; ++r) {
      const std::size_t row = k * d2 + r;
      b[row] = xc[r];
      for (std::size_t i = 0; i < ns; ++i) a[row * nvar + i * nt + k] = gcoords[i][r];
    }
  }
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t row = nt * d2 + i;
    b[row] = 1.0;
    for (std::size_t k = 0; k < nt; ++k) a[row * nvar + i * nt + k] = 1.0;
  }

  const AffineProjector affine(std::move(a), neq, nvar, std::move(b));
  DykstraOptions opts;
  opts.target = std::min(1e-12, eps * 1e-4);
  opts.max_iter = max_iter;
  const DykstraResult dr = dykstra(
      affine, [](std::span<double> v) {
        for (double& e : v) e = std::clamp(e, 0.0, 1.0);
      },
      std::vector<double>(nvar, 1.0 / static_cast<double>(nt)), opts);

  CoarseGrainingResult out;
  out.iterations = dr.iterations;
  const std::vector<double> p = polish_stochastic(dr.best_point, ns, nt);
  out.residual = coarse_graining_residual(x, gamma, p);
  if (out.residual <= eps) {
    out.feasible = true;
    out.matrix = StochasticMatrix(ns, nt, p);
  } else {
    out.residual = std::min(out.residual, dr.best_residual);
  }
  return out;
}

}  // namespace

double DiscreteObservable::normalization_residual() const {
  ComplexMatrix s(dim_, dim_);
  for (const HermitianOperator& e : elements_) s += e.matrix();
  return frobenius_distance(s, ComplexMatrix::identity(dim_));
}

DiscreteObservable validate_povm(std::vector<HermitianOperator> elements,
                                 std::vector<std::string> labels, double tol) {
  if (elements.empty()) throw Error("observable needs at least one element");
  const std::size_t d = elements.front().dim();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].dim() != d) {
      throw DimensionError("element " + std::to_string(i) + " has dimension " +
                           std::to_string(elements[i].dim()) + ", expected " + std::to_string(d));
    }
    const EigenDecomposition e = eigh(elements[i]);
    if (e.values.front() < -tol_psd || e.values.back() > 1.0 + tol_psd) {
      throw Error("element " + std::to_string(i) + " is not an effect: spectrum [" +
                  format_number(e.values.front()) + ", " + format_number(e.values.back()) + "]");
    }
  }
  if (labels.empty()) labels = default_labels(elements.size());
  if (labels.size() != elements.size()) {
    throw Error("observable has " + std::to_string(labels.size()) + " labels for " +
                std::to_string(elements.size()) + " elements");
  }
  DiscreteObservable x;
  x.dim_ = d;
  x.elements_ = std::move(elements);
  x.labels_ = std::move(labels);
  const double res = x.normalization_residual();
  if (!(res <= tol)) {
    throw Error("elements do not sum to the identity: residual " + format_number(res));
  }
  return x;
}

DiscreteObservable spectral_measure(const HermitianOperator& h, double tol) {
  const EigenDecomposition e = eigh(h);
  const std::size_t n = h.dim();
  std::vector<HermitianOperator> projs;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && e.values[stop] - e.values[stop - 1] <= tol) ++stop;
    ComplexMatrix p(n, n);
    for (std::size_t k = start; k < stop; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) += e.vectors(i, k) * std::conj(e.vectors(j, k));
    projs.emplace_back(p, 1e-10);
    start = stop;
  }
  return validate_povm(std::move(projs));
}

DiscreteObservable computational_basis_measurement(std::size_t dim) {
  std::vector<HermitianOperator> projs;
  for (std::size_t k = 0; k < dim; ++k) projs.push_back(HermitianOperator::projector(basis_vector(dim, k)));
  return validate_povm(std::move(projs));
}

DiscreteObservable trivial_observable(std::size_t dim, std::size_t outcomes) {
  std::vector<HermitianOperator> els(outcomes,
                                     (1.0 / static_cast<double>(outcomes)) * HermitianOperator::identity(dim));
  return validate_povm(std::move(els));
}

std::vector<double> probabilities(const DiscreteObservable& x, const DensityMatrix& rho) {
  if (x.dim() != rho.dim()) {
    throw DimensionError("observable dimension " + std::to_string(x.dim()) +
                         " does not match state dimension " + std::to_string(rho.dim()));
  }
  std::vector<double> p;
  p.reserve(x.outcome_count());
  for (const HermitianOperator& e : x.elements()) {
    p.push_back(inner(e.matrix(), rho.matrix()).real());
  }
  return p;
}

bool is_sharp(const DiscreteObservable& x, double tol) {
  for (const HermitianOperator& e : x.elements()) {
    if (frobenius_distance(e.matrix() * e.matrix(), e.matrix()) > tol) return false;
  }
  return true;
}

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                                   double tol)
    : rows_(rows), cols_(cols), p_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("stochastic matrix must be nonempty");
  if (p_.size() != rows_ * cols_) throw DimensionError("stochastic matrix entry count mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < cols_; ++k) {
      const double v = p_[i * cols_ + k];
      if (!(v >= -tol && v <= 1.0 + tol)) {
        throw Error("stochastic matrix entry (" + std::to_string(i) + ", " + std::to_string(k) +
                    ") = " + format_number(v) + " is outside [0, 1]");
      }
      s += v;
    }
    if (!(std::abs(s - 1.0) <= tol)) {
      throw Error("stochastic matrix row " + std::to_string(i) + " sums to " + format_number(s));
    }
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<double> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
  return StochasticMatrix(n, n, std::move(p));
}

StochasticMatrix StochasticMatrix::uniform(std::size_t rows, std::size_t cols) {
  return StochasticMatrix(rows, cols, std::vector<double>(rows * cols, 1.0 / static_cast<double>(cols)));
}

StochasticMatrix operator*(const StochasticMatrix& a, const StochasticMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("stochastic matrix shapes do not chain");
  std::vector<double> p(a.rows_ * b.cols_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      for (std::size_t l = 0; l < b.cols_; ++l) p[i * b.cols_ + l] += a(i, k) * b(k, l);
  return StochasticMatrix(a.rows_, b.cols_, std::move(p), 1e-10);
}

DiscreteObservable coarse_grain(const DiscreteObservable& gamma, const StochasticMatrix& p) {
  if (p.rows() != gamma.outcome_count()) {
    throw DimensionError("stochastic matrix has " + std::to_string(p.rows()) + " rows but the observable has " +
                         std::to_string(gamma.outcome_count()) + " outcomes");
  }
  std::vector<HermitianOperator> out;
  std::vector<double> col(p.rows());
  for (std::size_t k = 0; k < p.cols(); ++k) {
    for (std::size_t i = 0; i < p.rows(); ++i) col[i] = p(i, k);
    out.emplace_back(combination(gamma, col), 1e-10);
  }
  return validate_povm(std::move(out), {}, 1e-9);
}

DiscreteObservable pullback(const DiscreteObservable& y, const QuantumChannel& n) {
  if (y.dim() != n.dim_out()) {
    throw DimensionError("observable dimension " + std::to_string(y.dim()) +
                         " does not match channel output " + std::to_string(n.dim_out()));
  }
  std::vector<HermitianOperator> out;
  for (const HermitianOperator& e : y.elements()) out.push_back(adjoint_apply(n, e));
  return validate_povm(std::move(out), y.outcome_labels(), 1e-9);
}

double gram_min_eigenvalue(const DiscreteObservable& gamma) {
  return gram_of(gamma).eig.values.front();
}

CoarseGrainingResult coarse_graining_witness(const DiscreteObservable& x,
                                             const DiscreteObservable& gamma, double eps,
                                             int max_iter) {
  if (x.dim() != gamma.dim()) {
    throw DimensionError("observables act on different dimensions (" + std::to_string(x.dim()) +
                         " vs " + std::to_string(gamma.dim()) + ")");
  }
  const Gram gr = gram_of(gamma);
  if (gr.eig.values.front() >= kIndependenceThreshold) {
    const std::size_t ns = gamma.outcome_count();
    const std::size_t nt = x.outcome_count();
    std::vector<double> p(ns * nt);
    bool in_box = true;
    std::vector<double> r(ns);
    for (std::size_t k = 0; k < nt; ++k) {
      for (std::size_t i = 0; i < ns; ++i) r[i] = inner(gamma.element(i).matrix(), x.element(k).matrix()).real();
      const std::vector<double> alpha = gram_solve(gr, r);
      for (std::size_t i = 0; i < ns; ++i) {
        p[i * nt + k] = alpha[i];
        if (alpha[i] < -kBoxSlack || alpha[i] > 1.0 + kBoxSlack) in_box = false;
      }
    }
    const double raw = coarse_graining_residual(x, gamma, p);
    if (in_box && raw <= eps) {
      const std::vector<double> polished = polish_stochastic(p, ns, nt);
      CoarseGrainingResult out;
      out.direct_solve = true;
      out.residual = coarse_graining_residual(x, gamma, polished);
      if (out.residual <= eps) {
        out.feasible = true;
        out.matrix = StochasticMatrix(ns, nt, polished);
        return out;
      }
    }
    // The unique linear solution is outside the box (or X is outside the
    // span): report the residual the projection method attains.
    CoarseGrainingResult out = coarse_graining_by_projection(x, gamma, eps, max_iter);
    out.direct_solve = true;
    return out;
  }
  return coarse_graining_by_projection(x, gamma, eps, max_iter);
}

SimplexCoefficients simplex_coefficients(const HermitianOperator& a, const DiscreteObservable& gamma) {
  if (a.dim() != gamma.dim()) throw DimensionError("operator and observable dimensions differ");
  const Gram gr = gram_of(gamma);
  if (gr.eig.values.front() < kIndependenceThreshold) {
    throw Error("observable elements are linearly dependent (Gram eigenvalue " +
                format_number(gr.eig.values.front()) + ")");
  }
  std::vector<double> r(gr.n);
  for (std::size_t i = 0; i < gr.n; ++i) r[i] = inner(gamma.element(i).matrix(), a.matrix()).real();
  SimplexCoefficients out;
  out.alpha = gram_solve(gr, r);
  const double recon = frobenius_distance(combination(gamma, out.alpha), a.matrix());
  if (recon > 1e-8) {
    throw Error("operator lies outside the span of the observable's elements (residual " +
                format_number(recon) + ")");
  }
  out.margin = std::numeric_limits<double>::infinity();
  for (double v : out.alpha) out.margin = std::min({out.margin, v, 1.0 - v});
  out.inside = out.margin >= -kBoxSlack;
  return out;
}

}  // namespace pointer_lab
