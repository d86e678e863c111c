// SPDX-License-Identifier: Apache-2.0
//
// Dykstra alternating projections between an affine set {y : A y = b} and a
// closed convex set given by its projector. Used for both the preservation
// problem (PSD blocks) and coarse-graining witnesses (the unit box).

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pointer_lab {

// Orthogonal projector onto the least-squares solution set of A y = b.
// With a consistent system this is the affine set itself. Built once from
// the pseudo-inverse of A (through whichever Gram matrix is smaller).
class AffineProjector {
 public:
  // a: m x n row-major.
  AffineProjector(std::vector<double> a, std::size_t m, std::size_t n, std::vector<double> b,
                  double rank_tol = 1e-12);

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::size_t rank() const { return rank_; }

  // out = Q y + c, where Q projects onto null(A) and c = A^+ b.
  void project(std::span<const double> y, std::span<double> out) const;

  // ||A y - b||_2
  double residual(std::span<const double> y) const;

  // ||A A^+ b - b||: zero iff the equations are consistent.
  double inconsistency() const { return inconsistency_; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> q_;  // n x n
  std::vector<double> c_;  // n
  std::size_t rank_ = 0;
  double inconsistency_ = 0.0;
};

struct DykstraOptions {
  double target = 1e-10;   // stop once the cone iterate's residual drops below
  int max_iter = 50000;
  // Stop when the best residual improved by less than this relative amount
  // over stall_window iterations. 0 disables.
  int stall_window = 2000;
  double stall_rel = 1e-9;
  bool record_trace = false;
};

struct DykstraResult {
  std::vector<double> best_point;   // cone iterate with the smallest residual
  std::vector<double> best_affine;  // affine iterate that produced it
  double best_residual = 0.0;
  int best_iteration = 0;
  int iterations = 0;
  bool stalled = false;
  std::vector<double> trace;  // best residual after each iteration
};

using ConeProjector = std::function<void(std::span<double>)>;

DykstraResult dykstra(const AffineProjector& affine, const ConeProjector& cone,
                      std::vector<double> start, const DykstraOptions& opts);

}  // namespace pointer_lab
