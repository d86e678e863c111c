// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrices with exact shapes, Hermitian/density-matrix value
// types, and the small set of kernels the rest of the library is built on:
// Jacobi eigendecomposition, Kronecker products, partial traces and
// Hermitian exponentials.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pointer_lab {

using cplx = std::complex<double>;

// Tolerance ladder shared by every module.
inline constexpr double tol_herm = 1e-12;   // entrywise Hermitian symmetry
inline constexpr double tol_psd = 1e-10;    // cone membership
inline constexpr double tol_recon = 1e-10;  // factorizations and normalization
inline constexpr double tol_trace = 1e-12;  // unit trace of user-supplied states

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Six significant digits, for diagnostics.
std::string format_number(double v);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  // |v><w|
  static ComplexMatrix outer(std::span<const cplx> v, std::span<const cplx> w);
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> entries() { return data_; }
  std::span<const cplx> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(A^dagger B), the Frobenius inner product.
cplx inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(A B) for arbitrary square A, B of equal size.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

class HermitianOperator {
 public:
  HermitianOperator() = default;
  // Rejects matrices that are not square or not Hermitian within tol;
  // stores the exact Hermitian part (M + M^dagger)/2.
  explicit HermitianOperator(const ComplexMatrix& m, double tol = tol_herm);

  static HermitianOperator identity(std::size_t n);
  static HermitianOperator zero(std::size_t n);
  // Projector |v><v| / <v|v>.
  static HermitianOperator projector(std::span<const cplx> v);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

// Cyclic Jacobi. Each eigenvector's phase is fixed so that its
// largest-magnitude entry is real and nonnegative.
EigenDecomposition eigh(const HermitianOperator& h);

double min_eigenvalue(const HermitianOperator& h);

struct RealEigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major n x n, columns are eigenvectors
};

// Real symmetric variant used for Gram matrices and pseudo-inverses.
RealEigenDecomposition eigh_real(std::span<const double> a, std::size_t n);

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Validates PSD (min eigenvalue >= -tol_psd) and unit trace.
  explicit DensityMatrix(HermitianOperator op, double trace_tol = tol_trace);

  // For outputs of CPTP maps, where positivity holds by construction.
  static DensityMatrix assume_valid(HermitianOperator op);
  static DensityMatrix pure(std::span<const cplx> psi);
  static DensityMatrix maximally_mixed(std::size_t n);

  std::size_t dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

  // Tr(rho^2) == 1 within tol.
  bool is_pure(double tol = tol_recon) const;

 private:
  HermitianOperator op_;
};

// Kronecker product, block (i, j) equal to A_ij * B.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(std::span<const ComplexMatrix> factors);

// Traces out every factor not listed in keep. Kept factors appear in the
// result in ascending factor order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> factor_dims,
                            std::span<const std::size_t> keep);

// exp(-i t H)
ComplexMatrix unitary_from_hamiltonian(const HermitianOperator& h, double t);

// f(H) = V f(lambda) V^dagger for a real function on the spectrum.
template <class F>
HermitianOperator spectral_function(const HermitianOperator& h, F&& f) {
  const EigenDecomposition e = eigh(h);
  const std::size_t n = h.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = e.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return HermitianOperator(out, 1e-9);
}

// Positive part of H (eigenvalues clipped at zero).
HermitianOperator psd_projection(const HermitianOperator& h);

// Spectrum within [-tol, 1 + tol].
bool is_effect(const HermitianOperator& a, double tol = tol_psd);

bool is_unitary(const ComplexMatrix& u, double tol = tol_recon);

// Pauli matrices and common states.
namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

std::vector<cplx> basis_vector(std::size_t dim, std::size_t k);

// Orthonormal real coordinates for d x d Hermitian matrices:
// d diagonal entries followed by sqrt(2) Re, sqrt(2) Im of each upper entry.
// Euclidean norm of the coordinates equals the Frobenius norm.
std::vector<double> hermitian_coordinates(const ComplexMatrix& h);
void hermitian_coordinates(const ComplexMatrix& h, std::span<double> out);
ComplexMatrix hermitian_from_coordinates(std::span<const double> c, std::size_t d);

}  // namespace pointer_lab
