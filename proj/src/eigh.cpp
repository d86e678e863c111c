// SPDX-License-Identifier: Apache-2.0
//
// Cyclic Jacobi eigensolver shared by the complex Hermitian and the real
// symmetric entry points.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "pointer_lab/linalg.hpp"

namespace pointer_lab {

namespace {

inline double conj_of(double x) { return x; }
inline cplx conj_of(cplx z) { return std::conj(z); }
inline double real_of(double x) { return x; }
inline double real_of(cplx z) { return z.real(); }

constexpr int kMaxSweeps = 100;

// a: n x n row-major, overwritten with (nearly) diagonal matrix.
// v: n x n row-major, receives the accumulated rotations (columns).
template <class T>
void jacobi(std::vector<T>& a, std::vector<T>& v, std::size_t n) {
  v.assign(n * n, T{});
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T{1};
  auto at = [&](std::size_t i, std::size_t j) -> T& { return a[i * n + j]; };

  double total = 0.0;
  for (const T& x : a) total += std::norm(x);
  if (total == 0.0) return;
  const double stop = 1e-30 * total;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    if (2.0 * off <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T beta = at(p, q);
        const double mag = std::abs(beta);
        if (mag == 0.0) continue;
        const double alpha = real_of(at(p, p));
        const double gamma = real_of(at(q, q));
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(alpha) + 100.0 * mag == std::abs(alpha) &&
            std::abs(gamma) + 100.0 * mag == std::abs(gamma)) {
          at(p, q) = T{};
          at(q, p) = T{};
          continue;
        }
        const T phase = beta / mag;  // e^{i phi}
        const double theta = (gamma - alpha) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = [[c, s], [-s conj(phase), c conj(phase)]] acting on columns p, q.
        const T g00 = T{c};
        const T g01 = T{s};
        const T g10 = T{-s} * conj_of(phase);
        const T g11 = T{c} * conj_of(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const T akp = at(k, p);
          const T akq = at(k, q);
          at(k, p) = akp * g00 + akq * g10;
          at(k, q) = akp * g01 + akq * g11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T apk = at(p, k);
          const T aqk = at(q, k);
          at(p, k) = conj_of(g00) * apk + conj_of(g10) * aqk;
          at(q, k) = conj_of(g01) * apk + conj_of(g11) * aqk;
        }
        at(p, q) = T{};
        at(q, p) = T{};
        at(p, p) = T{alpha - t * mag};
        at(q, q) = T{gamma + t * mag};

        for (std::size_t k = 0; k < n; ++k) {
          const T vkp = v[k * n + p];
          const T vkq = v[k * n + q];
          v[k * n + p] = vkp * g00 + vkq * g10;
          v[k * n + q] = vkp * g01 + vkq * g11;
        }
      }
    }
  }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& vals) {
  std::vector<std::size_t> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return vals[i] < vals[j]; });
  return idx;
}

}  // namespace

EigenDecomposition eigh(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  std::vector<cplx> a(h.matrix().entries().begin(), h.matrix().entries().end());
  std::vector<cplx> v;
  jacobi(a, v, n);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
  const std::vector<std::size_t> order = ascending_order(diag);

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = diag[src];
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(v[i * n + src]));
    // first entry within rounding of the maximum magnitude fixes the phase
    cplx ref{1.0};
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = v[i * n + src];
      if (std::abs(z) >= best * (1.0 - 1e-12)) {
        ref = z / std::abs(z);
        break;
      }
    }
    const cplx fix = std::conj(ref);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v[i * n + src] * fix;
  }
  return out;
}

RealEigenDecomposition eigh_real(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) throw DimensionError("eigh_real: buffer is not n x n");
  std::vector<double> m(a.begin(), a.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = s;
      m[j * n + i] = s;
    }
  std::vector<double> v;
  jacobi(m, v, n);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m[i * n + i];
  const std::vector<std::size_t> order = ascending_order(diag);

  RealEigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

}  // namespace pointer_lab
