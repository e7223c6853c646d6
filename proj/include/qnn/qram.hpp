// Classical emulation of the memory oracles: classical-data QRAM word
// tables, Grover-Rudolph state-preparation trees, the preprocessed matrix
// structure (unit columns + d-bit arccos angle words), the CR_Y amplitude
// loader, and diagonal block-encodings read from QRAM.
#pragma once

#include "qnn/encodings.hpp"

#include <cstdint>
#include <vector>

namespace qnn {

inline constexpr int kDefaultAngleBits = 16;

struct ClassicalQram {
  std::vector<std::uint64_t> words;
  int word_bits = kDefaultAngleBits;
};

ClassicalQram make_qram(Eigen::Index addresses, int word_bits);
void qram_write(ClassicalQram& q, Eigen::Index addr, std::uint64_t word);
std::uint64_t qram_read(const ClassicalQram& q, Eigen::Index addr);

// Binary tree of partial squared norms over the amplitudes of x:
// levels[l] holds 2^l nodes, each the sum of its two children; levels[n]
// holds |x_i|²; the root equals ‖x‖₂².  Phases are kept at the leaves.
struct StatePrepTree {
  int n = 0;
  CVector leaves;                           // original amplitudes
  std::vector<std::vector<double>> levels;  // levels[0] = {root}
};

StatePrepTree build_state_tree(const CVector& x);
// Persistent single-entry update; touches exactly n+1 nodes.
StatePrepTree update_entry(const StatePrepTree& t, Eigen::Index idx, Complex value);
// Internal-node consistency check (node = sum of children) at tolerance.
bool tree_consistent(const StatePrepTree& t, double tol = 1e-12);

// Grover-Rudolph preparation with d-bit rotation-angle words:
// (1, 0, rounding-ε)-VE of x/‖x‖₂ with ε ≤ 2^{−(d−2)}·√N.
VectorEncoding state_prep_ve(const StatePrepTree& t, int d = kDefaultAngleBits,
                             Mode mode = Mode::Semantic);

// Preprocessed matrix QRAM structure: W|j⟩ = a_j·w_j with ‖w_j‖ = 1,
// a_j ∈ [0,1] stored as d-bit angle words b_j = round(arccos(a_j)·D/π).
struct MatrixQramStructure {
  CMatrix unit_columns;                  // column j = w_j
  RVector col_norms;                     // a_j
  std::vector<std::uint64_t> angle_words;  // b_j
  int d = kDefaultAngleBits;

  Eigen::Index dim() const { return unit_columns.rows(); }
  // W reconstructed from the stored decomposition (exact a_j).
  CMatrix reconstruct() const;
  // max_j |a_j − cos(b_j·π/D)|, the tracked rounding error.
  double rounding_error() const;
};

// Requires ‖w‖₂ ≤ 1 + 1e-10 (callers pre-scale).
MatrixQramStructure build_matrix_structure(const CMatrix& w, int d = kDefaultAngleBits);

// U_W oracle applied to an encoding of ψ: (α, a, ε)-VE of Σ_j ψ_j|j⟩|w_j⟩.
VectorEncoding oracle_uw(const MatrixQramStructure& s, const VectorEncoding& psi);

// (1, d+1, rounding-ε)-BE of diag(a) for real |a_j| ≤ 1; circuit mode builds
// (I⊗U†)(CR_Y(π/D)⊗I)(I⊗U).
BlockEncoding diagonal_be_from_qram(const RVector& a_values, int d = kDefaultAngleBits,
                                    Mode mode = Mode::Semantic);

// Complex diagonal via real/imaginary split: (2, d+2, ·)-BE of diag(a).
BlockEncoding diagonal_be_from_qram_complex(const CVector& a_values,
                                            int d = kDefaultAngleBits,
                                            Mode mode = Mode::Semantic);

// Single-qubit state cos(a·t)|0⟩ + sin(a·t)|1⟩ with t = π/2^d, computed as
// the cascade of controlled e^{−i 2^j t Y} rotations over the word's bits.
CVector cr_y_load(std::uint64_t angle_word, int d);

}  // namespace qnn
