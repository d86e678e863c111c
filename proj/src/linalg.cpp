// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "pointer_lab/kernels.hpp"

namespace pointer_lab {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix entry count " + std::to_string(data_.size()) +
                         " does not match shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v, std::span<const cplx> w) {
  ComplexMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square matrix");
  cplx t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::active_kernels().cdotc(data_.data(), data_.data(), data_.size()).real());
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active_kernels().cgemm(a.entries().data(), b.entries().data(), c.entries().data(),
                                  a.rows(), a.cols(), b.cols());
  return c;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch in inner");
  return kernels::active_kernels().cdotc(a.entries().data(), b.entries().data(), a.entries().size());
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionError("shape mismatch in trace_of_product");
  }
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tol) {
  if (!m.is_square() || m.rows() == 0) {
    throw DimensionError("Hermitian operator needs a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol)) {
    throw Error("matrix is not Hermitian: max |M - M^dagger| = " + format_number(defect));
  }
  m_ = ComplexMatrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianOperator HermitianOperator::identity(std::size_t n) {
  return HermitianOperator(ComplexMatrix::identity(n));
}

HermitianOperator HermitianOperator::zero(std::size_t n) {
  return HermitianOperator(ComplexMatrix(n, n));
}

HermitianOperator HermitianOperator::projector(std::span<const cplx> v) {
  double nrm2 = 0.0;
  for (const cplx& z : v) nrm2 += std::norm(z);
  if (!(nrm2 > 0.0)) throw Error("projector onto the zero vector");
  ComplexMatrix p = ComplexMatrix::outer(v, v);
  p *= 1.0 / nrm2;
  return HermitianOperator(p);
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  HermitianOperator out;
  out.m_ = a.m_ + b.m_;
  return out;
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  HermitianOperator out;
  out.m_ = a.m_ - b.m_;
  return out;
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  HermitianOperator out;
  out.m_ = a.m_ * cplx{s};
  return out;
}

double min_eigenvalue(const HermitianOperator& h) { return eigh(h).values.front(); }

DensityMatrix::DensityMatrix(HermitianOperator op, double trace_tol) : op_(std::move(op)) {
  const double tr = op_.trace();
  if (!(std::abs(tr - 1.0) <= trace_tol)) {
    throw Error("density matrix trace is " + format_number(tr) + ", expected 1");
  }
  const double lmin = min_eigenvalue(op_);
  if (!(lmin >= -tol_psd)) {
    throw Error("density matrix is not positive semidefinite: min eigenvalue " +
                format_number(lmin));
  }
}

DensityMatrix DensityMatrix::assume_valid(HermitianOperator op) {
  DensityMatrix d;
  d.op_ = std::move(op);
  return d;
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
  return DensityMatrix(HermitianOperator::projector(psi));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  ComplexMatrix m = ComplexMatrix::identity(n);
  m *= 1.0 / static_cast<double>(n);
  return DensityMatrix(HermitianOperator(m));
}

bool DensityMatrix::is_pure(double tol) const {
  return std::abs(trace_of_product(matrix(), matrix()).real() - 1.0) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::identity(1);
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> keep) {
  if (!m.is_square()) throw DimensionError("partial trace of a non-square matrix");
  if (keep.empty()) throw DimensionError("partial trace needs at least one kept factor");
  std::size_t total = 1;
  for (std::size_t d : factor_dims) {
    if (d == 0) throw DimensionError("factor dimension must be positive");
    total *= d;
  }
  if (total != m.rows()) {
    throw DimensionError("factor dimensions multiply to " + std::to_string(total) +
                         " but the matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  const std::size_t nf = factor_dims.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) {
    if (k >= nf) throw DimensionError("keep index " + std::to_string(k) + " out of range");
    kept[k] = true;
  }

  // stride of each factor in the full index
  std::vector<std::size_t> stride(nf);
  std::size_t s = 1;
  for (std::size_t f = nf; f-- > 0;) {
    stride[f] = s;
    s *= factor_dims[f];
  }

  // offsets contributed by every multi-index over the kept / traced factors
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> offs{0};
    for (std::size_t f = 0; f < nf; ++f) {
      if (kept[f] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(offs.size() * factor_dims[f]);
      for (std::size_t o : offs)
        for (std::size_t v = 0; v < factor_dims[f]; ++v) next.push_back(o + v * stride[f]);
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<std::size_t> kept_off = offsets(true);
  const std::vector<std::size_t> traced_off = offsets(false);

  const std::size_t dk = kept_off.size();
  ComplexMatrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      cplx acc{};
      for (std::size_t t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix unitary_from_hamiltonian(const HermitianOperator& h, double t) {
  const EigenDecomposition e = eigh(h);
  const std::size_t n = h.dim();
  ComplexMatrix phased = e.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx ph = std::polar(1.0, -t * e.values[k]);
    for (std::size_t i = 0; i < n; ++i) phased(i, k) *= ph;
  }
  return phased * e.vectors.adjoint();
}

HermitianOperator psd_projection(const HermitianOperator& h) {
  return spectral_function(h, [](double x) { return x > 0.0 ? x : 0.0; });
}

bool is_effect(const HermitianOperator& a, double tol) {
  const EigenDecomposition e = eigh(a);
  return e.values.front() >= -tol && e.values.back() <= 1.0 + tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.is_square()) return false;
  return frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(u.rows())) <= tol;
}

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

std::vector<cplx> basis_vector(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("basis index out of range");
  std::vector<cplx> v(dim);
  v[k] = 1.0;
  return v;
}

void hermitian_coordinates(const ComplexMatrix& h, std::span<double> out) {
  const std::size_t d = h.rows();
  if (out.size() != d * d) throw DimensionError("coordinate buffer has wrong size");
  static const double r2 = std::sqrt(2.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) out[k++] = h(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      out[k++] = r2 * h(i, j).real();
      out[k++] = r2 * h(i, j).imag();
    }
}

std::vector<double> hermitian_coordinates(const ComplexMatrix& h) {
  std::vector<double> out(h.rows() * h.rows());
  hermitian_coordinates(h, out);
  return out;
}

ComplexMatrix hermitian_from_coordinates(std::span<const double> c, std::size_t d) {
  if (c.size() != d * d) throw DimensionError("coordinate vector has wrong size");
  static const double inv_r2 = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(d, d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) h(i, i) = c[k++];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const cplx v{c[k] * inv_r2, c[k + 1] * inv_r2};
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  return h;
}

}  // namespace pointer_lab
