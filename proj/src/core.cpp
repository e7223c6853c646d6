#include "qnn/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace qnn {

int log2_exact(Eigen::Index n, const char* what) {
  if (!is_power_of_two(n))
    throw ContractError(std::string(what) + " must be a power of two, got " +
                        std::to_string(n));
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

void require_pow2_dims(const CMatrix& m, const char* what) {
  if (!is_power_of_two(m.rows()) || !is_power_of_two(m.cols()))
    throw ContractError(std::string(what) + ": dimensions must be powers of two (" +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
}

void require_pow2_dim(const CVector& v, const char* what) {
  if (!is_power_of_two(v.size()))
    throw ContractError(std::string(what) + ": dimension must be a power of two (" +
                        std::to_string(v.size()) + ")");
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CVector basis_state(Eigen::Index n, Eigen::Index i) {
  if (i < 0 || i >= n) throw ContractError("basis_state: index out of range");
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

CMatrix qft(int num_qubits) {
  if (num_qubits < 0 || num_qubits > 20)
    throw ContractError("qft: qubit count out of supported range");
  const Eigen::Index n = Eigen::Index{1} << num_qubits;
  CMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phase =
          2.0 * std::numbers::pi * static_cast<double>((i * j) % n) / static_cast<double>(n);
      f(i, j) = scale * Complex(std::cos(phase), std::sin(phase));
    }
  return f;
}

CMatrix cyclic_shift(Eigen::Index n) {
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p((j + 1) % n, j) = 1.0;
  return p;
}

Svd svd(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  const Eigen::Index r = out.s.size();
  CMatrix recon = out.u.leftCols(r) * out.s.asDiagonal() * out.v.leftCols(r).adjoint();
  const double err = (recon - m).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(err <= 1e-10 * scale))
    throw NumericError("svd: reconstruction check failed, error " + std::to_string(err));
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> solver(m);
  return solver.singularValues()(0);
}

CMatrix sqrt_psd(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw NumericError("sqrt_psd: eigendecomposition failed");
  RVector ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -1e-9)
    throw NumericError("sqrt_psd: matrix is not positive semidefinite");
  RVector root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix unitary_dilation(const CMatrix& b) {
  if (b.rows() != b.cols()) throw ContractError("unitary_dilation: matrix must be square");
  const double nrm = spectral_norm(b);
  if (nrm > 1.0 + 1e-12)
    throw ContractError("unitary_dilation: spectral norm " + std::to_string(nrm) +
                        " exceeds 1");
  const Eigen::Index n = b.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix defect_left = sqrt_psd(id - b * b.adjoint());
  CMatrix defect_right = sqrt_psd(id - b.adjoint() * b);
  CMatrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = b;
  u.topRightCorner(n, n) = defect_left;
  u.bottomLeftCorner(n, n) = defect_right;
  u.bottomRightCorner(n, n) = -b.adjoint();
  if (!is_unitary(u, 1e-10))
    throw NumericError("unitary_dilation: dilation failed the unitarity check");
  return u;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  CMatrix g = u.adjoint() * u;
  return (g - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qnn
