// Block- and vector-encodings with exact (scale, ancilla, error-bound)
// ledgers, plus the composition operations on them.
//
// Every operation runs in one of two modes:
//  * Semantic  — compute the encoded block/column and the ledger exactly.
//  * Circuit   — additionally materialize a unitary realization (explicit
//                construction where one is defined, Halmos dilation
//                otherwise).  Only available while ancillas + system qubits
//                stay at or below kMaxCircuitQubits.
#pragma once

#include "qnn/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qnn {

enum class Mode { Semantic, Circuit };

inline constexpr int kMaxCircuitQubits = 14;
inline constexpr double kDegenerateNorm = 1e-12;

// Scale / ancilla / error-bound triple carried by every encoding.
struct Ledger {
  double alpha = 1.0;
  int ancillas = 0;
  double eps_bound = 0.0;
  std::string depth;  // symbolic circuit-depth expression
};

// (alpha, ancillas, eps)-block-encoding of a target matrix A:
// ‖A − alpha·block‖₂ ≤ eps_bound, where block is the top-left 2^n block of
// the (possibly only notional) realization unitary.
struct BlockEncoding {
  CMatrix block;
  double alpha = 1.0;
  int ancillas = 0;
  double eps_bound = 0.0;
  std::string depth = "1";
  std::optional<CMatrix> target;
  std::optional<CMatrix> realization;

  int system_qubits() const { return log2_exact(block.rows(), "block dimension"); }
  int total_qubits() const { return ancillas + system_qubits(); }
  // ‖target − alpha·block‖₂; requires target.
  double actual_error() const;
  void validate() const;
};

// (alpha, ancillas, eps)-vector-encoding of a state ψ:
// ‖ψ − alpha·vec‖₂ ≤ eps_bound, vec being the first 2^n amplitudes of the
// realization's first column.
struct VectorEncoding {
  CVector vec;
  double alpha = 1.0;
  int ancillas = 0;
  double eps_bound = 0.0;
  std::string depth = "1";
  std::optional<CVector> target;
  std::optional<CMatrix> realization;

  int system_qubits() const { return log2_exact(vec.size(), "vector dimension"); }
  int total_qubits() const { return ancillas + system_qubits(); }
  double actual_error() const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Constructors.
// ---------------------------------------------------------------------------

// Exact (1, 0, 0)-encodings.
BlockEncoding be_from_unitary(const CMatrix& u, Mode mode = Mode::Semantic);
VectorEncoding ve_exact(const CVector& state, Mode mode = Mode::Semantic);

// (1, 2, 0)-block-encoding of |i⟩⟨j| on n qubits.
BlockEncoding be_basis_projector(int n, Eigen::Index i, Eigen::Index j,
                                 Mode mode = Mode::Semantic);

// ---------------------------------------------------------------------------
// Block-encoding arithmetic.
// ---------------------------------------------------------------------------

// Product: encodes A_u · A_v with ledger (αβ, a+b, α·ε_v + β·ε_u).
BlockEncoding be_product(const BlockEncoding& u, const BlockEncoding& v,
                         Mode mode = Mode::Semantic);

// Tensor: encodes A_u ⊗ A_v with ledger (αβ, a+b, ε_u·β + ε_v·α + ε_u·ε_v).
BlockEncoding be_tensor(const BlockEncoding& u, const BlockEncoding& v,
                        Mode mode = Mode::Semantic);

// Linear combination Σ_j w_j A_j of encodings sharing one ledger; weights
// must be non-negative (absorb signs into the encoded unitaries).  With
// β = Σ w_j and d index qubits the ledger is (αβ, a+d, αβε).  An explicit
// preparation column (amplitudes √(w_j/β)) may be supplied for circuit mode.
BlockEncoding be_lcu(const std::vector<BlockEncoding>& parts,
                     const std::vector<double>& weights, Mode mode = Mode::Semantic,
                     std::optional<CVector> prep = std::nullopt);

// Raise the ancilla count without changing the encoded block/vector.
BlockEncoding pad_ancillas(const BlockEncoding& u, int new_ancillas);
VectorEncoding pad_ancillas(const VectorEncoding& u, int new_ancillas);

// ---------------------------------------------------------------------------
// Vector-encoding arithmetic.
// ---------------------------------------------------------------------------

// Convex combination (τψ/α + (1−τ)φ/β)/𝒩; ledger (1/𝒩, 1+max(a,b),
// (ε_u/α + ε_v/β)/𝒩).  Throws NumericError when the sum annihilates
// (𝒩 < 1e-12).
VectorEncoding ve_sum(const VectorEncoding& u, const VectorEncoding& v, double tau,
                      Mode mode = Mode::Semantic);

// Matrix–vector product Aψ/𝒩 with 𝒩 = ‖Aψ‖; ledger (αβ/𝒩, a+b, (ε_A+α·ε_ψ)/𝒩).
VectorEncoding ve_matvec(const BlockEncoding& a, const VectorEncoding& psi,
                         Mode mode = Mode::Semantic);

// Tensor product ψ⊗φ; ledger (αβ, a+b, ε+δ+εδ).
VectorEncoding ve_tensor(const VectorEncoding& u, const VectorEncoding& v,
                         Mode mode = Mode::Semantic);

// Concatenation Σ_j |j⟩ψ_j/α_j normalized; parts share ancilla count and
// error bound; ledger (D/𝒩, log2(D)+a, ε) with 𝒩 = sqrt(Σ α_j^{-2}).
VectorEncoding ve_concat(const std::vector<VectorEncoding>& parts,
                         Mode mode = Mode::Semantic);

// Restore unit scale by a sign-polynomial reflection around the encoded
// norm; requires ε_u ≤ 1/2 and ‖vec‖ ≥ 1/(2·alpha_hint).
// Ledger (1, a+4, 2(ε_u+eps_poly)).
VectorEncoding ve_normalize(const VectorEncoding& u, double alpha_hint, double eps_poly,
                            Mode mode = Mode::Semantic);

// Dilute the amplitude by 1/τ (τ ≥ 1); ledger (ατ, a+2, ε).
VectorEncoding ve_deamplify(const VectorEncoding& u, double tau,
                            Mode mode = Mode::Semantic);

// Reinterpret u, whose target ψ_m itself vector-encodes an inner state φ_n
// with inner_ancillas = m−n ancillas, scale inner_alpha and error inner_eps,
// up to preparation drift ‖φ − inner_alpha·head(ψ_m)‖ ≤ drift.
// Ledger (α·inner_alpha, a+inner_ancillas, inner_eps + inner_alpha·(ε+drift)).
VectorEncoding ve_subencode(const VectorEncoding& u, int inner_ancillas,
                            double inner_alpha, double inner_eps, double drift,
                            std::optional<CVector> inner_target = std::nullopt);

// Discard a leading |0⟩^b register: target must be |0⟩_b ⊗ φ.  Ledger
// (α, a+b, ε).
VectorEncoding ve_traceout(const VectorEncoding& u, int b);

// Top-left 2^(t−a) block of a realization unitary.
CMatrix extract_block(const CMatrix& realization, int ancillas);
// First 2^(t−a) amplitudes of the realization's first column.
CVector extract_vec(const CMatrix& realization, int ancillas);

// ---------------------------------------------------------------------------
// Realization helpers (circuit mode).
// ---------------------------------------------------------------------------

// Generic realization via Halmos dilation, padded to `ancillas` qubits
// (ancillas ≥ 1 unless the block is itself unitary).
CMatrix materialize_block(const CMatrix& block, int ancillas);
CMatrix materialize_vec(const CVector& vec, int ancillas);

// Throws ContractError if a circuit on `qubits` qubits exceeds the cap.
void require_circuit_budget(int qubits, const char* where);

}  // namespace qnn
