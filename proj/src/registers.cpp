#include "qnn/registers.hpp"

#include <algorithm>

namespace qnn {

CMatrix apply_to_registers(const CMatrix& u, int total_qubits,
                           const std::vector<int>& positions) {
  const int k = static_cast<int>(positions.size());
  if (u.rows() != u.cols() || u.rows() != (Eigen::Index{1} << k))
    throw ContractError("apply_to_registers: operator size does not match qubit count");
  if (total_qubits < k || total_qubits > 24)
    throw ContractError("apply_to_registers: bad total qubit count");
  for (int p : positions)
    if (p < 0 || p >= total_qubits)
      throw ContractError("apply_to_registers: qubit position out of range");

  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  const Eigen::Index sub = Eigen::Index{1} << k;
  // Bit masks: positions[q] == 0 is the most significant qubit.
  std::vector<Eigen::Index> bit(k);
  for (int q = 0; q < k; ++q) bit[q] = Eigen::Index{1} << (total_qubits - 1 - positions[q]);

  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index j_sub = 0, rest = col;
    for (int q = 0; q < k; ++q)
      if (col & bit[q]) {
        j_sub |= sub >> (q + 1);
        rest &= ~bit[q];
      }
    for (Eigen::Index i_sub = 0; i_sub < sub; ++i_sub) {
      const Complex v = u(i_sub, j_sub);
      if (v == Complex(0.0, 0.0)) continue;
      Eigen::Index row = rest;
      for (int q = 0; q < k; ++q)
        if (i_sub & (sub >> (q + 1))) row |= bit[q];
      out(row, col) = v;
    }
  }
  return out;
}

CMatrix unitary_from_first_column(const CVector& col) {
  const Eigen::Index n = col.size();
  if (std::abs(col.norm() - 1.0) > 1e-10)
    throw ContractError("unitary_from_first_column: column is not unit norm");
  // Householder mapping e0 -> col.
  CVector w = col;
  Complex phase = (std::abs(w(0)) > 1e-14) ? w(0) / std::abs(w(0)) : Complex(1.0, 0.0);
  CVector v = w + phase * basis_state(n, 0);
  const double vn = v.norm();
  CMatrix h = CMatrix::Identity(n, n);
  if (vn > 1e-14) {
    v /= vn;
    h -= 2.0 * (v * v.adjoint());
  }
  // h maps e0 to -phase^{-1}... fix the global column phase explicitly.
  CMatrix u = -phase * h;
  // Guard: first column must match.
  if ((u.col(0) - col).norm() > 1e-9)
    throw NumericError("unitary_from_first_column: completion failed");
  return u;
}

CMatrix prepend_identity(const CMatrix& u, int extra) {
  if (extra < 0) throw ContractError("prepend_identity: negative qubit count");
  if (extra == 0) return u;
  return kron(CMatrix(CMatrix::Identity(Eigen::Index{1} << extra, Eigen::Index{1} << extra)),
              u);
}

}  // namespace qnn
