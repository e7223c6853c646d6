// Coherent nonlinearity on encodings: polynomial amplitude transforms of
// vector encodings, the erf activation, the rank-independent matrix times
// element-wise-squared-vector product, and squared-ℓ₂ pooling.
#pragma once

#include "qnn/polynomials.hpp"
#include "qnn/qram.hpp"

#include <functional>

namespace qnn {

// Contiguous squared-ℓ₂ pooling of an input_dim vector into bins bins.
struct PoolingSpec {
  Eigen::Index bins = 1;
  Eigen::Index input_dim = 1;
};

// Metadata about the function a polynomial stands in for: its Lipschitz
// constant L, a certified bound γ̃ ≥ max_{[-1,1]} |p(x)/x|, the approximation
// budget ε₁ (p is within L·ε₁/(2√N) of f on the encoded interval), and f
// itself for target bookkeeping (p is used when f is absent).
struct NlatMeta {
  double lipschitz = 1.0;
  double gamma_bound = 1.0;
  double eps1 = 0.0;
  std::function<double(double)> f;
};

// Amplitude transform ψ/α ↦ f(ψ/α)/𝒩 on a real-state encoding; ledger
// (4γ̃/𝒩, n+2a+4, L(ε₀+ε₁)/𝒩).  The encoded column gets p applied entrywise
// and divided by 4γ̃.
VectorEncoding nlat_ve(const VectorEncoding& u, const ChebyshevPoly& p,
                       const NlatMeta& meta, Mode mode = Mode::Semantic);

// erf(ν·) activation, ν ≥ 1/2, 0 < eps1 ≤ 2; ledger
// (16ν/(√π𝒩), 2a+n+4, 2να(ε₀+ε₁)) with the guaranteed floor 𝒩 ≥ 1/(2α).
VectorEncoding erf_apply_ve(const VectorEncoding& u, double nu, double eps1,
                            Mode mode = Mode::Semantic);

// W·g(ψ)/𝒩 with g(x) = |x|², W given column-decomposed; never forms a
// block-encoding of W.  Ledger (α²/𝒩, 2a+d+3+n, ≤ 2α(ε+ε_round)/𝒩).
VectorEncoding matvec_squared(const MatrixQramStructure& s, const VectorEncoding& psi,
                              Mode mode = Mode::Semantic);

// Bin j = Σ over its contiguous block of |x_l|²; output dimension spec.bins.
CVector pool_l2sq(const CVector& x, const PoolingSpec& spec);

// Error propagated through squared-ℓ₂ pooling: 2·N·eps/√C.
double pool_error_bound(Eigen::Index n_dim, Eigen::Index c_bins, double eps);

}  // namespace qnn
