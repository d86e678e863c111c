// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/dykstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointer_lab/kernels.hpp"
#include "pointer_lab/linalg.hpp"

namespace pointer_lab {

AffineProjector::AffineProjector(std::vector<double> a, std::size_t m, std::size_t n,
                                 std::vector<double> b, double rank_tol)
    : m_(m), n_(n), a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != m * n || b_.size() != m) throw DimensionError("affine system has wrong shape");
  const auto& kt = kernels::active_kernels();

  // Right singular vectors spanning the row space of A, with their
  // squared singular values.
  std::vector<std::vector<double>> w;
  std::vector<double> sig2;
  if (n <= m) {
    std::vector<double> g(n * n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double* row = a_.data() + r * n;
      for (std::size_t i = 0; i < n; ++i) {
        if (row[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) g[i * n + j] += row[i] * row[j];
      }
    }
    const RealEigenDecomposition e = eigh_real(g, n);
    const double top = e.values.empty() ? 0.0 : std::max(e.values.back(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(e.values[k] > rank_tol * top) || top == 0.0) continue;
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = e.vectors[i * n + k];
      w.push_back(std::move(col));
      sig2.push_back(e.values[k]);
    }
  } else {
    std::vector<double> g(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        const double s = kt.ddot(a_.data() + i * n, a_.data() + j * n, n);
        g[i * m + j] = s;
        g[j * m + i] = s;
      }
    const RealEigenDecomposition e = eigh_real(g, m);
    const double top = e.values.empty() ? 0.0 : std::max(e.values.back(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      if (!(e.values[k] > rank_tol * top) || top == 0.0) continue;
      const double sigma = std::sqrt(e.values[k]);
      std::vector<double> col(n, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        const double u = e.vectors[r * m + k] / sigma;
        if (u == 0.0) continue;
        const double* row = a_.data() + r * n;
        for (std::size_t i = 0; i < n; ++i) col[i] += row[i] * u;
      }
      w.push_back(std::move(col));
      sig2.push_back(e.values[k]);
    }
  }
  rank_ = w.size();

  // A^T b
  std::vector<double> atb(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double br = b_[r];
    if (br == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) atb[i] += a_[r * n + i] * br;
  }

  q_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q_[i * n + i] = 1.0;
  c_.assign(n, 0.0);
  for (std::size_t k = 0; k < rank_; ++k) {
    const std::vector<double>& wk = w[k];
    for (std::size_t i = 0; i < n; ++i) {
      if (wk[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) q_[i * n + j] -= wk[i] * wk[j];
    }
    const double coef = kt.ddot(wk.data(), atb.data(), n) / sig2[k];
    for (std::size_t i = 0; i < n; ++i) c_[i] += coef * wk[i];
  }
  inconsistency_ = residual(c_);
}

void AffineProjector::project(std::span<const double> y, std::span<double> out) const {
  kernels::active_kernels().dgemv(q_.data(), y.data(), out.data(), n_, n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] += c_[i];
}

double AffineProjector::residual(std::span<const double> y) const {
  std::vector<double> ay(m_);
  kernels::active_kernels().dgemv(a_.data(), y.data(), ay.data(), m_, n_);
  double s = 0.0;
  for (std::size_t r = 0; r < m_; ++r) {
    const double d = ay[r] - b_[r];
    s += d * d;
  }
  return std::sqrt(s);
}

DykstraResult dykstra(const AffineProjector& affine, const ConeProjector& cone,
                      std::vector<double> start, const DykstraOptions& opts) {
  const std::size_t n = affine.cols();
  if (start.size() != n) throw DimensionError("Dykstra start point has wrong size");

  DykstraResult res;
  res.best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> x = std::move(start);
  std::vector<double> y(n), v(n), q(n, 0.0);
  // best residual recorded every iteration, used for the stall test
  std::vector<double> history;
  if (opts.stall_window > 0) history.reserve(std::min(opts.max_iter, 1 << 20));

  for (int it = 1; it <= opts.max_iter; ++it) {
    affine.project(x, y);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] + q[i];
    x = v;
    cone(x);
    for (std::size_t i = 0; i < n; ++i) q[i] = v[i] - x[i];

    const double r = affine.residual(x);
    res.iterations = it;
    if (r < res.best_residual) {
      res.best_residual = r;
      res.best_point = x;
      res.best_affine = y;
      res.best_iteration = it;
    }
    if (opts.record_trace) res.trace.push_back(res.best_residual);
    if (res.best_residual <= opts.target) break;
    if (opts.stall_window > 0) {
      history.push_back(res.best_residual);
      const auto w = static_cast<std::size_t>(opts.stall_window);
      if (history.size() > w) {
        const double before = history[history.size() - 1 - w];
        if (res.best_residual > before * (1.0 - opts.stall_rel)) {
          res.stalled = true;
          break;
        }
      }
    }
  }
  return res;
}

}  // namespace pointer_lab
