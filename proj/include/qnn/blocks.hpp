// Architectural blocks: the skip-norm residual block, the k-block stack with
// its doubling ancilla ledger, and the full-rank linear-pooling output block
// with norm-floor guarantees, plus class sampling.
#pragma once

#include "qnn/nonlinear.hpp"

namespace qnn {

// One residual block: weight_be encodes W/kappa with ‖W‖₂ ≤ 1; eps1 is the
// activation/normalization error budget of the block.
struct ResidualBlockSpec {
  BlockEncoding weight_be;
  double kappa = 2.0;
  double eps1 = 1e-3;
};

// k-block residual stack with final error budget eps; per-layer budgets
// follow the schedule eps_i = eps / 1424^{k-i}.
struct StackSpec {
  std::vector<ResidualBlockSpec> blocks;
  double eps = 1e-2;
};

// Intermediate norms exposed for floor assertions and reports.
struct SkipNormStats {
  double n1 = 0.0;      // ‖Wψ/κ‖
  double n2 = 0.0;      // ‖f(Wψ)‖
  double n_gamma = 0.0; // pre-normalization norm, ≥ 1/400
};

// (1, 2(a+b)+n+9, ≤712(ε₀+ε₁))-VE of (ψ + erf(4Wψ/5))/𝒩.
VectorEncoding skip_norm_block(const VectorEncoding& psi, const ResidualBlockSpec& spec,
                               Mode mode = Mode::Semantic,
                               SkipNormStats* stats = nullptr);

// (1, 2^k(a+2b+n+9), ε)-VE of the k-fold block composition.
VectorEncoding residual_stack(const VectorEncoding& psi, const StackSpec& spec,
                              Mode mode = Mode::Semantic);

// Classical forward map of one residual block: (x + erf(4Wx/5)) normalized.
CVector skip_norm_oracle(const CMatrix& w, const CVector& x);

struct OutputBlockResult {
  VectorEncoding encoding;
  PoolingSpec pooling;
  double n_gamma = 0.0;  // pre-normalization norm, ≥ 0.02
  double eps0_required = 0.0;
  double eps1 = 0.0;
};

// The input error budget the output block demands for a final error eps.
double output_block_input_budget(Eigen::Index n_dim, Eigen::Index c_bins, double eps);

// VE of γ/𝒩_γ with γ = τψ + (1−τ)W·g(ψ), τ = 0.51; pooled sampling of the
// result is within eps of y = pool(γ/𝒩_γ).
OutputBlockResult output_block(const VectorEncoding& psi, const MatrixQramStructure& w,
                               Eigen::Index c_bins, double eps,
                               Mode mode = Mode::Semantic);

// Classical oracle for the output block's pre-pooling state γ/𝒩_γ.
CVector output_block_oracle(const CMatrix& w, const CVector& x);

// Samples from the |vec|²-renormalized distribution binned per the pooling
// spec.  shots = 0 returns the exact binned probability vector; shots ≥ 1
// returns raw counts.
RVector sample_class(const VectorEncoding& v, const PoolingSpec& spec, long long shots,
                     std::uint64_t seed);

}  // namespace qnn
