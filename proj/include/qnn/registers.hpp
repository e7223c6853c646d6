// Helpers for assembling explicit unitaries on multi-register systems.
// Qubit 0 is the most significant bit of a basis index; ancilla registers
// always sit above (more significant than) the system register.
#pragma once

#include "qnn/core.hpp"

#include <vector>

namespace qnn {

// Embed an operator `u` acting on the qubits listed in `positions` (given in
// the operator's own qubit order) into a `total_qubits` system; identity on
// the rest.
CMatrix apply_to_registers(const CMatrix& u, int total_qubits,
                           const std::vector<int>& positions);

// Unitary whose first column is `col` (must be unit norm within 1e-10),
// completed by a Householder reflection.
CMatrix unitary_from_first_column(const CVector& col);

// I_{2^extra} ⊗ u : prepend `extra` trivial ancilla qubits.
CMatrix prepend_identity(const CMatrix& u, int extra);

}  // namespace qnn
