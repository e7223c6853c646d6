// Core dense complex linear algebra used throughout the simulator.
//
// All state dimensions in this library are powers of two.  Matrices and
// vectors are plain Eigen dense types; everything here is a free function
// so expressions compose naturally.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qnn {

using Real = double;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Working tolerance for exact-identity checks.
inline constexpr double kTol = 1e-10;

// ---------------------------------------------------------------------------
// Error taxonomy.  Every failure mode the library reports maps to one of
// these; the CLI translates them to exit codes.
// ---------------------------------------------------------------------------

// Violated precondition or ill-formed configuration (exit code 2).
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, loss of precision, degenerate input
// (exit code 3).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A tracked error bound was exceeded by the observed error (exit code 1).
struct BoundViolation : std::runtime_error {
  explicit BoundViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Dimension helpers.
// ---------------------------------------------------------------------------

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Exact log2 of a power-of-two dimension; throws ContractError otherwise.
int log2_exact(Eigen::Index n, const char* what = "dimension");

void require_pow2_dims(const CMatrix& m, const char* what);
void require_pow2_dim(const CVector& v, const char* what);

// ---------------------------------------------------------------------------
// Basic constructions.
// ---------------------------------------------------------------------------

// Kronecker product, row-major qubit convention: (a ⊗ b)[i*rb+k, j*cb+l].
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

// Computational basis column e_i of dimension n.
CVector basis_state(Eigen::Index n, Eigen::Index i);

// Quantum Fourier transform matrix F[i,j] = exp(2πi·ij/N)/√N.
CMatrix qft(int num_qubits);

// Cyclic shift P|j> = |j+1 mod N>.
CMatrix cyclic_shift(Eigen::Index n);

// ---------------------------------------------------------------------------
// Decompositions.
// ---------------------------------------------------------------------------

struct Svd {
  CMatrix u;       // left singular vectors (square)
  RVector s;       // singular values, descending
  CMatrix v;       // right singular vectors (square); m = u * s.diag * v†
};

// Full SVD with verified reconstruction (‖m − UΣV†‖ ≤ 1e-10·max(1,‖m‖)).
Svd svd(const CMatrix& m);

double spectral_norm(const CMatrix& m);

// Principal square root of a positive semidefinite Hermitian matrix.
CMatrix sqrt_psd(const CMatrix& h);

// Halmos dilation of a contraction b (‖b‖₂ ≤ 1 + 1e-12):
//   [[ b,            sqrt(I − b b†)],
//    [ sqrt(I − b† b),       −b†   ]]
// The result is unitary within 1e-10 and doubles the dimension.
CMatrix unitary_dilation(const CMatrix& b);

// True if ‖u†u − I‖∞ ≤ tol.
bool is_unitary(const CMatrix& u, double tol = kTol);

}  // namespace qnn
