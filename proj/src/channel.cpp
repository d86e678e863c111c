// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/channel.hpp"

#include <cmath>
#include <numeric>

namespace pointer_lab {

namespace {

std::vector<cplx> dominant_vector(const DensityMatrix& rho) {
  const EigenDecomposition e = eigh(rho.op());
  const std::size_t n = rho.dim();
  std::vector<cplx> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = e.vectors(i, n - 1);
  return psi;
}

void require_pure(const DensityMatrix& env_state) {
  if (!env_state.is_pure()) {
    throw Error("environment state must be pure (Tr rho^2 = " +
                format_number(trace_of_product(env_state.matrix(), env_state.matrix()).real()) +
                ")");
  }
}

}  // namespace

QuantumChannel::QuantumChannel(std::size_t dim_in, std::size_t dim_out,
                               std::vector<ComplexMatrix> kraus, double tol)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  if (dim_in_ == 0 || dim_out_ == 0) throw DimensionError("channel dimensions must be positive");
  if (kraus_.empty()) throw Error("channel needs at least one Kraus operator");
  for (std::size_t k = 0; k < kraus_.size(); ++k) {
    if (kraus_[k].rows() != dim_out_ || kraus_[k].cols() != dim_in_) {
      throw DimensionError("Kraus operator " + std::to_string(k) + " is " +
                           std::to_string(kraus_[k].rows()) + "x" +
                           std::to_string(kraus_[k].cols()) + ", expected " +
                           std::to_string(dim_out_) + "x" + std::to_string(dim_in_));
    }
  }
  const double defect = trace_preservation_defect();
  if (!(defect <= tol)) {
    throw Error("channel is not trace preserving: ||sum E^dagger E - 1||_F = " +
                format_number(defect));
  }
}

double QuantumChannel::trace_preservation_defect() const {
  ComplexMatrix s(dim_in_, dim_in_);
  for (const ComplexMatrix& e : kraus_) s += e.adjoint() * e;
  return frobenius_distance(s, ComplexMatrix::identity(dim_in_));
}

QuantumChannel QuantumChannel::identity(std::size_t dim) {
  return QuantumChannel(dim, dim, {ComplexMatrix::identity(dim)});
}

QuantumChannel QuantumChannel::complete_dephasing(std::size_t dim) {
  std::vector<ComplexMatrix> ks;
  for (std::size_t j = 0; j < dim; ++j) {
    ComplexMatrix p(dim, dim);
    p(j, j) = 1.0;
    ks.push_back(std::move(p));
  }
  return QuantumChannel(dim, dim, std::move(ks));
}

QuantumChannel QuantumChannel::amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("damping rate must lie in [0, 1]");
  ComplexMatrix e0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}};
  ComplexMatrix e1{{0.0, std::sqrt(gamma)}, {0.0, 0.0}};
  return QuantumChannel(2, 2, {e0, e1});
}

QuantumChannel QuantumChannel::unitary(const ComplexMatrix& u) {
  if (!is_unitary(u)) throw Error("matrix is not unitary");
  return QuantumChannel(u.cols(), u.rows(), {u});
}

QuantumChannel QuantumChannel::constant(std::size_t dim_in, const DensityMatrix& sigma) {
  // E_{j,a} = sqrt(s_j) |v_j><a|
  const EigenDecomposition e = eigh(sigma.op());
  const std::size_t d = sigma.dim();
  std::vector<ComplexMatrix> ks;
  for (std::size_t j = 0; j < d; ++j) {
    if (e.values[j] <= 0.0) continue;
    const double w = std::sqrt(e.values[j]);
    for (std::size_t a = 0; a < dim_in; ++a) {
      ComplexMatrix k(d, dim_in);
      for (std::size_t i = 0; i < d; ++i) k(i, a) = w * e.vectors(i, j);
      ks.push_back(std::move(k));
    }
  }
  return QuantumChannel(dim_in, d, std::move(ks));
}

ComplexMatrix apply(const QuantumChannel& n, const ComplexMatrix& m) {
  if (m.rows() != n.dim_in() || m.cols() != n.dim_in()) {
    throw DimensionError("state dimension " + std::to_string(m.rows()) +
                         " does not match channel input " + std::to_string(n.dim_in()));
  }
  ComplexMatrix out(n.dim_out(), n.dim_out());
  for (const ComplexMatrix& e : n.kraus()) out += e * m * e.adjoint();
  return out;
}

DensityMatrix apply(const QuantumChannel& n, const DensityMatrix& rho) {
  return DensityMatrix::assume_valid(HermitianOperator(apply(n, rho.matrix()), 1e-10));
}

ComplexMatrix adjoint_apply(const QuantumChannel& n, const ComplexMatrix& b) {
  if (b.rows() != n.dim_out() || b.cols() != n.dim_out()) {
    throw DimensionError("operator dimension " + std::to_string(b.rows()) +
                         " does not match channel output " + std::to_string(n.dim_out()));
  }
  ComplexMatrix out(n.dim_in(), n.dim_in());
  for (const ComplexMatrix& e : n.kraus()) out += e.adjoint() * (b * e);
  return out;
}

HermitianOperator adjoint_apply(const QuantumChannel& n, const HermitianOperator& b) {
  return HermitianOperator(adjoint_apply(n, b.matrix()), 1e-10);
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  if (inner.dim_out() != outer.dim_in()) {
    throw DimensionError("cannot compose: inner output " + std::to_string(inner.dim_out()) +
                         " != outer input " + std::to_string(outer.dim_in()));
  }
  std::vector<ComplexMatrix> ks;
  ks.reserve(outer.kraus().size() * inner.kraus().size());
  for (const ComplexMatrix& f : outer.kraus())
    for (const ComplexMatrix& e : inner.kraus()) ks.push_back(f * e);
  return QuantumChannel(inner.dim_in(), outer.dim_out(), std::move(ks), 1e-9);
}

QuantumChannel tensor_channel(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<ComplexMatrix> ks;
  ks.reserve(a.kraus().size() * b.kraus().size());
  for (const ComplexMatrix& e : a.kraus())
    for (const ComplexMatrix& f : b.kraus()) ks.push_back(tensor(e, f));
  return QuantumChannel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(), std::move(ks), 1e-9);
}

QuantumChannel from_dilation(const ComplexMatrix& u, const DensityMatrix& env_state,
                             std::size_t sys_dim) {
  const std::size_t ed = env_state.dim();
  if (sys_dim == 0 || u.rows() != sys_dim * ed || !u.is_square()) {
    throw DimensionError("dilation unitary must be (sys_dim * env_dim) square");
  }
  if (!is_unitary(u)) throw Error("dilation matrix is not unitary");
  require_pure(env_state);
  const std::vector<cplx> psi = dominant_vector(env_state);

  const std::size_t d = sys_dim * ed;
  ComplexMatrix v(d, sys_dim);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t a = 0; a < sys_dim; ++a) {
      cplx acc{};
      for (std::size_t e = 0; e < ed; ++e) acc += u(r, a * ed + e) * psi[e];
      v(r, a) = acc;
    }
  return QuantumChannel(sys_dim, d, {v});
}

QuantumChannel system_channel_from_dilation(const ComplexMatrix& u, const DensityMatrix& env_state,
                                            std::size_t sys_dim) {
  const std::size_t ed = env_state.dim();
  if (sys_dim == 0 || u.rows() != sys_dim * ed || !u.is_square()) {
    throw DimensionError("dilation unitary must be (sys_dim * env_dim) square");
  }
  if (!is_unitary(u)) throw Error("dilation matrix is not unitary");
  require_pure(env_state);
  const std::vector<cplx> psi = dominant_vector(env_state);

  std::vector<ComplexMatrix> ks;
  for (std::size_t k = 0; k < ed; ++k) {
    ComplexMatrix e(sys_dim, sys_dim);
    for (std::size_t s = 0; s < sys_dim; ++s)
      for (std::size_t a = 0; a < sys_dim; ++a) {
        cplx acc{};
        for (std::size_t j = 0; j < ed; ++j) acc += u(s * ed + k, a * ed + j) * psi[j];
        e(s, a) = acc;
      }
    ks.push_back(std::move(e));
  }
  return QuantumChannel(sys_dim, sys_dim, std::move(ks));
}

namespace {

// Choi matrix of rho -> Tr_traced(N(rho)). Each output index is split into
// a kept part and a traced part; block (a, b) of the Choi matrix is
// sum_k U_ka U_kb^dagger, where U_ka is column a of E_k reshaped to
// (kept x traced).
ComplexMatrix reduced_choi(const QuantumChannel& n, std::span<const std::size_t> dims,
                           std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != n.dim_out()) throw DimensionError("fragment dimensions do not match channel output");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw DimensionError("fragment index out of range");
    kept[k] = true;
  }
  std::size_t dk = 1;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (kept[f]) dk *= dims[f];
  const std::size_t dt = total / dk;

  // (kept index, traced index) of every output basis index
  std::vector<std::size_t> kidx(total), tidx(total);
  for (std::size_t o = 0; o < total; ++o) {
    std::size_t rem = o, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t v = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        ki += v * kstride;
        kstride *= dims[f];
      } else {
        ti += v * tstride;
        tstride *= dims[f];
      }
    }
    kidx[o] = ki;
    tidx[o] = ti;
  }

  const std::size_t din = n.dim_in();
  // reshaped columns: cols[k][a] is dk x dt
  std::vector<std::vector<ComplexMatrix>> cols(n.kraus().size());
  for (std::size_t k = 0; k < n.kraus().size(); ++k) {
    const ComplexMatrix& e = n.kraus()[k];
    for (std::size_t a = 0; a < din; ++a) {
      ComplexMatrix u(dk, dt);
      for (std::size_t o = 0; o < total; ++o) u(kidx[o], tidx[o]) = e(o, a);
      cols[k].push_back(std::move(u));
    }
  }

  ComplexMatrix c(din * dk, din * dk);
  for (std::size_t a = 0; a < din; ++a)
    for (std::size_t b = a; b < din; ++b) {
      ComplexMatrix blk(dk, dk);
      for (std::size_t k = 0; k < cols.size(); ++k) blk += cols[k][a] * cols[k][b].adjoint();
      for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
          c(a * dk + i, b * dk + j) = blk(i, j);
          c(b * dk + j, a * dk + i) = std::conj(blk(i, j));
        }
    }
  return c;
}

}  // namespace

HermitianOperator choi(const QuantumChannel& n) {
  const std::size_t dims[] = {n.dim_out()};
  const std::size_t keep[] = {0};
  return HermitianOperator(reduced_choi(n, dims, keep), 1e-10);
}

QuantumChannel channel_from_choi(const HermitianOperator& c, std::size_t dim_in,
                                 std::size_t dim_out, double rank_cutoff) {
  if (c.dim() != dim_in * dim_out) throw DimensionError("Choi matrix has the wrong dimension");
  const EigenDecomposition e = eigh(c);
  std::vector<ComplexMatrix> ks;
  for (std::size_t k = e.values.size(); k-- > 0;) {
    const double lam = e.values[k];
    if (lam < rank_cutoff) break;
    const double w = std::sqrt(lam);
    ComplexMatrix kr(dim_out, dim_in);
    for (std::size_t a = 0; a < dim_in; ++a)
      for (std::size_t o = 0; o < dim_out; ++o) kr(o, a) = w * e.vectors(a * dim_out + o, k);
    ks.push_back(std::move(kr));
  }
  if (ks.empty()) throw Error("Choi matrix has no eigenvalue above the rank cutoff");
  return QuantumChannel(dim_in, dim_out, std::move(ks), 1e-9);
}

BroadcastModel::BroadcastModel(QuantumChannel joint, std::vector<std::size_t> fragment_dims,
                               std::vector<std::string> labels)
    : joint_(std::move(joint)), fragment_dims_(std::move(fragment_dims)), labels_(std::move(labels)) {
  if (fragment_dims_.empty()) throw Error("broadcast model needs at least one fragment");
  std::size_t prod = 1;
  for (std::size_t d : fragment_dims_) {
    if (d == 0) throw DimensionError("fragment dimension must be positive");
    prod *= d;
  }
  if (prod != joint_.dim_out()) {
    throw DimensionError("fragment dimensions multiply to " + std::to_string(prod) +
                         " but the joint output is " + std::to_string(joint_.dim_out()));
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < fragment_dims_.size(); ++i) labels_.push_back("B" + std::to_string(i + 1));
  }
  if (labels_.size() != fragment_dims_.size()) {
    throw Error("broadcast model has " + std::to_string(labels_.size()) + " labels for " +
                std::to_string(fragment_dims_.size()) + " fragments");
  }
}

QuantumChannel marginal(const BroadcastModel& model, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DimensionError("marginal needs at least one fragment");
  std::size_t out_dim = 1;
  for (std::size_t k : keep) {
    if (k >= model.fragment_count()) {
      throw DimensionError("fragment index " + std::to_string(k) + " out of range (" +
                           std::to_string(model.fragment_count()) + " fragments)");
    }
    out_dim *= model.fragment_dims()[k];
  }
  const ComplexMatrix c = reduced_choi(model.joint(), model.fragment_dims(), keep);
  return channel_from_choi(HermitianOperator(c, 1e-10), model.dim_in(), out_dim);
}

QuantumChannel marginal(const BroadcastModel& model, std::size_t i) {
  const std::size_t keep[] = {i};
  return marginal(model, std::span<const std::size_t>(keep));
}

}  // namespace pointer_lab
