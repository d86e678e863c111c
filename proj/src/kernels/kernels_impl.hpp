// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pointer_lab/kernels.hpp"

namespace pointer_lab::kernels::detail {

void cgemm_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                  std::size_t n);
void dgemv_scalar(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
double ddot_scalar(const double* x, const double* y, std::size_t n);
cplx cdotc_scalar(const cplx* x, const cplx* y, std::size_t n);

#ifdef POINTER_LAB_HAVE_AVX2
void cgemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n);
void dgemv_avx2(const double* a, const double* x, double* y, std::size_t m, std::size_t n);
double ddot_avx2(const double* x, const double* y, std::size_t n);
cplx cdotc_avx2(const cplx* x, const cplx* y, std::size_t n);
#endif

}  // namespace pointer_lab::kernels::detail
