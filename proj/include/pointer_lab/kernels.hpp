// SPDX-License-Identifier: Apache-2.0
//
// Dense inner-loop kernels. Every routine has a scalar reference version and,
// on x86-64 hosts with AVX2+FMA, a vectorized version. The active table is
// chosen once at startup; POINTER_LAB_KERNELS=scalar|avx2 overrides the choice.

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace pointer_lab::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  // c[m x n] = a[m x k] * b[k x n], all row-major.
  void (*cgemm)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
  // y[m] = a[m x n] * x[n], row-major.
  void (*dgemv)(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
  double (*ddot)(const double* x, const double* y, std::size_t n);
  // sum_i conj(x_i) * y_i
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the binary or the host lacks AVX2/FMA.
const KernelTable* avx2_kernels();

const KernelTable& active_kernels();

// Switches the active table; returns false (and leaves it unchanged) when
// the named table is unavailable.
bool select_kernels(std::string_view name);

}  // namespace pointer_lab::kernels
