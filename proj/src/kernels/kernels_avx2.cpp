// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; it is entered only after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace pointer_lab::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

}  // namespace

// A complex<double> is two adjacent doubles, so one __m256d holds two
// complex numbers (re0, im0, re1, im1).
void cgemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n) {
  const std::size_t n2 = n / 2 * 2;
  for (std::size_t i = 0; i < m * n; ++i) c[i] = cplx{};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx{}) continue;
      const __m256d are = _mm256_set1_pd(aip.real());
      const __m256d aim = _mm256_set1_pd(aip.imag());
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d bsw = _mm256_permute_pd(bv, 0b0101);
        // even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br
        const __m256d prod = _mm256_fmaddsub_pd(are, bv, _mm256_mul_pd(aim, bsw));
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(_mm256_loadu_pd(crow + 2 * j), prod));
      }
      for (; j < n; ++j) {
        reinterpret_cast<cplx*>(crow)[j] += aip * reinterpret_cast<const cplx*>(brow)[j];
      }
    }
  }
}

double ddot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void dgemv_avx2(const double* a, const double* x, double* y, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) y[i] = ddot_avx2(a + i * n, x, n);
}

cplx cdotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  // re accumulates xr*yr + xi*yi lane-wise; im accumulates xr*yi - xi*yr
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    re = _mm256_fmadd_pd(xv, yv, re);
    const __m256d ysw = _mm256_permute_pd(yv, 0b0101);
    im = _mm256_fmadd_pd(xv, ysw, im);
  }
  alignas(32) double imv[4];
  _mm256_store_pd(imv, im);
  // im lanes: (xr*yi, xi*yr, xr'*yi', xi'*yr')
  double r = hsum(re);
  double s = (imv[0] - imv[1]) + (imv[2] - imv[3]);
  for (; i < n; ++i) {
    r += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    s += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {r, s};
}

}  // namespace pointer_lab::kernels::detail
