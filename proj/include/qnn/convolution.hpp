// 2D multi-filter convolution as a structured matrix and its block-encoding:
// shift operators P, Q, Q^m, the kernel LCU with sign absorption, and the
// spectral rescaling that yields conv/(2·‖conv‖₂) at unit scale.
#pragma once

#include "qnn/encodings.hpp"

#include <vector>

namespace qnn {

// Rank-4 real kernel K[out][in][row][col] with C = channels output and input
// channels and D = width filter rows/columns, both powers of two.
struct ConvKernel {
  int channels = 1;
  int width = 1;
  std::vector<double> data;  // row-major [C][C][D][D]

  double& at(int out, int in, int row, int col);
  double at(int out, int in, int row, int col) const;
  double l1() const;    // Σ |K|
  double l2sq() const;  // Σ K²
};

ConvKernel make_conv_kernel(int channels, int width);
// Zero-pad channel count and filter width up to the next powers of two.
ConvKernel pad_conv_kernel(const ConvKernel& k);

// Dense matrix form of the convolution acting on channel-major vectorized
// M×M images, with its exact spectral norm and the kernel's ℓ₁ norm.
struct ConvMatrix {
  CMatrix c_mat;
  double spectral_norm = 0.0;
  double kernel_l1 = 0.0;
};

// conv = Σ_{i,j,k,l} K[i,j,k,l]·(|i⟩⟨j| ⊗ Q^l ⊗ Q^k) on c + 2m qubits;
// cross_correlate swaps Q for Qᵀ.
ConvMatrix conv_matrix_form(const ConvKernel& k, int m, bool cross_correlate = false);

// Q = Σ_{j<N−1} |j+1⟩⟨j| (the cyclic shift without wrap-around).
CMatrix lower_shift(Eigen::Index n);

// (1, 1, 0)-block-encoding of P^power, P = Σ|j+1 mod N⟩⟨j|; circuit mode
// builds F·diag(ω^{−power·j})·F†.
BlockEncoding permutation_be(int n, int power, Mode mode = Mode::Semantic);

// (1, 4, 0)-block-encoding of Q: LCU of P and −|0⟩⟨N−1| followed by exact
// amplitude amplification off the 1/2 plateau.
BlockEncoding shift_q_be(int n, Mode mode = Mode::Semantic);

// (1, 4m, 0)-block-encoding of Q^m by m-fold product.
BlockEncoding shift_qm_be(int n, int m, Mode mode = Mode::Semantic);

// (1, 3 + 8D + 2log₂(CD), 0)-block-encoding of conv/(2·‖conv‖₂).
BlockEncoding conv_block_encoding(const ConvKernel& k, int m, Mode mode = Mode::Semantic);

}  // namespace qnn
