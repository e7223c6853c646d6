#include "qnn/encodings.hpp"

#include "qnn/polynomials.hpp"
#include "qnn/registers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qnn {

namespace {

std::string join_depth(const std::string& a, const std::string& b, const char* op) {
  return "(" + a + op + b + ")";
}

void check_same_ledger(double ea, double eb, int aa, int ab, double la, double lb,
                       const char* where) {
  if (aa != ab || std::abs(ea - eb) > 1e-12 || std::abs(la - lb) > 1e-12)
    throw ContractError(std::string(where) + ": parts must share one (alpha, ancillas, eps) ledger");
}

// Internal consistency between a freshly assembled realization and the
// semantic block/column.
void check_realization(const CMatrix& real, int ancillas, const CMatrix& block,
                       const char* where) {
  if (!is_unitary(real, 1e-10))
    throw NumericError(std::string(where) + ": realization is not unitary");
  if ((extract_block(real, ancillas) - block).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericError(std::string(where) + ": realization disagrees with semantic block");
}

void check_realization(const CMatrix& real, int ancillas, const CVector& vec,
                       const char* where) {
  if (!is_unitary(real, 1e-10))
    throw NumericError(std::string(where) + ": realization is not unitary");
  if ((extract_vec(real, ancillas) - vec).norm() > 1e-10)
    throw NumericError(std::string(where) + ": realization disagrees with semantic column");
}

CMatrix ensure_realization(const BlockEncoding& u) {
  if (u.realization) return *u.realization;
  return materialize_block(u.block, u.ancillas);
}

CMatrix ensure_realization(const VectorEncoding& u) {
  if (u.realization) return *u.realization;
  return materialize_vec(u.vec, u.ancillas);
}

}  // namespace

// ---------------------------------------------------------------------------
// Encoding structs.
// ---------------------------------------------------------------------------

double BlockEncoding::actual_error() const {
  if (!target) throw ContractError("actual_error: block-encoding has no target");
  return spectral_norm(*target - alpha * block);
}

void BlockEncoding::validate() const {
  require_pow2_dims(block, "block-encoding");
  if (block.rows() != block.cols()) throw ContractError("block-encoding: block must be square");
  if (alpha < 1.0 - 1e-12) throw ContractError("block-encoding: scale below 1");
  if (ancillas < 0) throw ContractError("block-encoding: negative ancilla count");
  if (!(eps_bound >= 0.0)) throw ContractError("block-encoding: negative error bound");
  if (spectral_norm(block) > 1.0 + 1e-10)
    throw NumericError("block-encoding: encoded block exceeds unit spectral norm");
  if (realization) {
    if (realization->rows() != (Eigen::Index{1} << total_qubits()))
      throw ContractError("block-encoding: realization dimension mismatch");
    check_realization(*realization, ancillas, block, "block-encoding");
  }
  if (target) {
    const double err = actual_error();
    if (err > eps_bound + 1e-9)
      throw BoundViolation("block-encoding: actual error " + std::to_string(err) +
                           " exceeds ledger bound " + std::to_string(eps_bound));
  }
}

double VectorEncoding::actual_error() const {
  if (!target) throw ContractError("actual_error: vector-encoding has no target");
  return (*target - alpha * vec).norm();
}

void VectorEncoding::validate() const {
  require_pow2_dim(vec, "vector-encoding");
  if (alpha < 1.0 - 1e-12) throw ContractError("vector-encoding: scale below 1");
  if (ancillas < 0) throw ContractError("vector-encoding: negative ancilla count");
  if (!(eps_bound >= 0.0)) throw ContractError("vector-encoding: negative error bound");
  if (vec.norm() > 1.0 + 1e-10)
    throw NumericError("vector-encoding: encoded column exceeds unit norm");
  if (realization) {
    if (realization->rows() != (Eigen::Index{1} << total_qubits()))
      throw ContractError("vector-encoding: realization dimension mismatch");
    check_realization(*realization, ancillas, vec, "vector-encoding");
  }
  if (target) {
    if (std::abs(target->norm() - 1.0) > 1e-9)
      throw ContractError("vector-encoding: target is not a unit vector");
    const double err = actual_error();
    if (err > eps_bound + 1e-9)
      throw BoundViolation("vector-encoding: actual error " + std::to_string(err) +
                           " exceeds ledger bound " + std::to_string(eps_bound));
  }
}

// ---------------------------------------------------------------------------
// Constructors.
// ---------------------------------------------------------------------------

BlockEncoding be_from_unitary(const CMatrix& u, Mode mode) {
  if (!is_unitary(u, 1e-10)) throw ContractError("be_from_unitary: input is not unitary");
  BlockEncoding out;
  out.block = u;
  out.target = u;
  if (mode == Mode::Circuit) out.realization = u;
  return out;
}

VectorEncoding ve_exact(const CVector& state, Mode mode) {
  require_pow2_dim(state, "ve_exact");
  if (std::abs(state.norm() - 1.0) > 1e-10)
    throw ContractError("ve_exact: state is not unit norm");
  VectorEncoding out;
  out.vec = state;
  out.target = state;
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "ve_exact");
    out.realization = unitary_from_first_column(state);
  }
  return out;
}

BlockEncoding be_basis_projector(int n, Eigen::Index i, Eigen::Index j, Mode mode) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (i < 0 || i >= dim || j < 0 || j >= dim)
    throw ContractError("be_basis_projector: index out of range");
  BlockEncoding out;
  out.block = basis_state(dim, i) * basis_state(dim, j).adjoint();
  out.alpha = 1.0;
  out.ancillas = 2;
  out.eps_bound = 0.0;
  out.target = out.block;
  out.depth = "3";
  if (mode == Mode::Circuit) {
    require_circuit_budget(n + 2, "be_basis_projector");
    // One-ancilla combination of I and the reflection about |0>, then basis
    // relabelling on each side, then one trivial padding ancilla.
    const CMatrix id = CMatrix::Identity(dim, dim);
    CMatrix refl = id - 2.0 * (basis_state(dim, 0) * basis_state(dim, 0).adjoint());
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    CMatrix sel = CMatrix::Zero(2 * dim, 2 * dim);
    sel.topLeftCorner(dim, dim) = id;
    sel.bottomRightCorner(dim, dim) = -refl;
    CMatrix v = kron(h, id) * sel * kron(h, id);
    CMatrix mi = CMatrix::Zero(dim, dim), mj = CMatrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
      mi(x ^ i, x) = 1.0;
      mj(x ^ j, x) = 1.0;
    }
    CMatrix conj = kron(CMatrix(CMatrix::Identity(2, 2)), mi) * v *
                   kron(CMatrix(CMatrix::Identity(2, 2)), mj);
    out.realization = prepend_identity(conj, 1);
    check_realization(*out.realization, out.ancillas, out.block, "be_basis_projector");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block arithmetic.
// ---------------------------------------------------------------------------

BlockEncoding be_product(const BlockEncoding& u, const BlockEncoding& v, Mode mode) {
  if (u.block.rows() != v.block.rows())
    throw ContractError("be_product: system dimensions differ");
  BlockEncoding out;
  out.block = u.block * v.block;
  out.alpha = u.alpha * v.alpha;
  out.ancillas = u.ancillas + v.ancillas;
  out.eps_bound = u.alpha * v.eps_bound + v.alpha * u.eps_bound;
  out.depth = join_depth(u.depth, v.depth, "+");
  if (u.target && v.target) out.target = (*u.target) * (*v.target);
  if (mode == Mode::Circuit) {
    const int n = u.system_qubits(), a = u.ancillas, b = v.ancillas;
    const int t = a + b + n;
    require_circuit_budget(t, "be_product");
    std::vector<int> pos_u(a), pos_v(b);
    std::iota(pos_u.begin(), pos_u.end(), 0);
    std::iota(pos_v.begin(), pos_v.end(), a);
    for (int q = 0; q < n; ++q) {
      pos_u.push_back(a + b + q);
      pos_v.push_back(a + b + q);
    }
    out.realization = apply_to_registers(ensure_realization(u), t, pos_u) *
                      apply_to_registers(ensure_realization(v), t, pos_v);
    check_realization(*out.realization, out.ancillas, out.block, "be_product");
  }
  return out;
}

BlockEncoding be_tensor(const BlockEncoding& u, const BlockEncoding& v, Mode mode) {
  BlockEncoding out;
  out.block = kron(u.block, v.block);
  out.alpha = u.alpha * v.alpha;
  out.ancillas = u.ancillas + v.ancillas;
  out.eps_bound =
      u.eps_bound * v.alpha + v.eps_bound * u.alpha + u.eps_bound * v.eps_bound;
  out.depth = join_depth(u.depth, v.depth, "|");
  if (u.target && v.target) out.target = kron(*u.target, *v.target);
  if (mode == Mode::Circuit) {
    const int nu = u.system_qubits(), nv = v.system_qubits();
    const int a = u.ancillas, b = v.ancillas;
    const int t = a + b + nu + nv;
    require_circuit_budget(t, "be_tensor");
    std::vector<int> pos_u(a), pos_v(b);
    std::iota(pos_u.begin(), pos_u.end(), 0);
    std::iota(pos_v.begin(), pos_v.end(), a);
    for (int q = 0; q < nu; ++q) pos_u.push_back(a + b + q);
    for (int q = 0; q < nv; ++q) pos_v.push_back(a + b + nu + q);
    out.realization = apply_to_registers(ensure_realization(u), t, pos_u) *
                      apply_to_registers(ensure_realization(v), t, pos_v);
    check_realization(*out.realization, out.ancillas, out.block, "be_tensor");
  }
  return out;
}

BlockEncoding be_lcu(const std::vector<BlockEncoding>& parts,
                     const std::vector<double>& weights, Mode mode,
                     std::optional<CVector> prep) {
  if (parts.empty() || parts.size() != weights.size())
    throw ContractError("be_lcu: need matching non-empty parts and weights");
  for (double w : weights)
    if (w < 0.0) throw ContractError("be_lcu: weights must be non-negative");
  const double alpha = parts[0].alpha;
  const int a = parts[0].ancillas;
  const double eps = parts[0].eps_bound;
  const Eigen::Index dim = parts[0].block.rows();
  for (const auto& p : parts) {
    check_same_ledger(p.eps_bound, eps, p.ancillas, a, p.alpha, alpha, "be_lcu");
    if (p.block.rows() != dim) throw ContractError("be_lcu: system dimensions differ");
  }
  const double beta =
      std::accumulate(weights.begin(), weights.end(), 0.0,
                      [](double s, double w) { return s + std::abs(w); });
  if (beta < kDegenerateNorm) throw NumericError("be_lcu: weight vector has zero l1 norm");

  int d = 0;
  while ((size_t{1} << d) < parts.size()) ++d;
  const size_t slots = size_t{1} << d;

  BlockEncoding out;
  out.block = CMatrix::Zero(dim, dim);
  for (size_t j = 0; j < parts.size(); ++j) out.block += (weights[j] / beta) * parts[j].block;
  out.alpha = alpha * beta;
  out.ancillas = a + d;
  out.eps_bound = alpha * beta * eps;
  out.depth = "(" + parts[0].depth + "*" + std::to_string(slots) + "+2)";
  bool have_targets = std::all_of(parts.begin(), parts.end(),
                                  [](const BlockEncoding& p) { return bool(p.target); });
  if (have_targets) {
    CMatrix t = CMatrix::Zero(dim, dim);
    for (size_t j = 0; j < parts.size(); ++j) t += weights[j] * (*parts[j].target);
    out.target = t;
  }
  if (mode == Mode::Circuit) {
    const int n = parts[0].system_qubits();
    require_circuit_budget(d + a + n, "be_lcu");
    const Eigen::Index inner = Eigen::Index{1} << (a + n);
    CVector prep_col = CVector::Zero(Eigen::Index(slots));
    for (size_t j = 0; j < parts.size(); ++j)
      prep_col(Eigen::Index(j)) = std::sqrt(weights[j] / beta);
    // Guard against the prep column losing norm to rounding.
    prep_col /= prep_col.norm();
    if (prep) {
      if (prep->size() != Eigen::Index(slots))
        throw ContractError("be_lcu: prep column has wrong dimension");
      if ((prep->cwiseAbs() - prep_col.cwiseAbs()).cwiseAbs().maxCoeff() > 1e-9)
        throw ContractError("be_lcu: prep column amplitudes disagree with weights");
      prep_col = *prep;
    }
    CMatrix ub = unitary_from_first_column(prep_col);
    CMatrix select = CMatrix::Zero(Eigen::Index(slots) * inner, Eigen::Index(slots) * inner);
    for (size_t j = 0; j < slots; ++j) {
      CMatrix rj;
      if (j < parts.size()) {
        rj = ensure_realization(parts[j]);
      } else {
        rj = CMatrix::Identity(inner, inner);
      }
      select.block(Eigen::Index(j) * inner, Eigen::Index(j) * inner, inner, inner) = rj;
    }
    const CMatrix id_inner = CMatrix::Identity(inner, inner);
    out.realization = kron(CMatrix(ub.adjoint()), id_inner) * select * kron(ub, id_inner);
    check_realization(*out.realization, out.ancillas, out.block, "be_lcu");
  }
  return out;
}

BlockEncoding pad_ancillas(const BlockEncoding& u, int new_ancillas) {
  if (new_ancillas < u.ancillas) throw ContractError("pad_ancillas: cannot shrink ancillas");
  BlockEncoding out = u;
  if (out.realization) out.realization = prepend_identity(*out.realization, new_ancillas - u.ancillas);
  out.ancillas = new_ancillas;
  return out;
}

VectorEncoding pad_ancillas(const VectorEncoding& u, int new_ancillas) {
  if (new_ancillas < u.ancillas) throw ContractError("pad_ancillas: cannot shrink ancillas");
  VectorEncoding out = u;
  if (out.realization) out.realization = prepend_identity(*out.realization, new_ancillas - u.ancillas);
  out.ancillas = new_ancillas;
  return out;
}

// ---------------------------------------------------------------------------
// Vector arithmetic.
// ---------------------------------------------------------------------------

VectorEncoding ve_sum(const VectorEncoding& u, const VectorEncoding& v, double tau,
                      Mode mode) {
  if (u.vec.size() != v.vec.size()) throw ContractError("ve_sum: dimensions differ");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ContractError("ve_sum: tau must lie in [0,1]");
  if (!u.target || !v.target)
    throw ContractError("ve_sum: both operands need targets to scale the sum");
  CVector combo = (tau / u.alpha) * (*u.target) + ((1.0 - tau) / v.alpha) * (*v.target);
  const double nrm = combo.norm();
  if (nrm < kDegenerateNorm)
    throw NumericError("ve_sum: annihilation, combined state has vanishing norm");
  VectorEncoding out;
  out.vec = tau * u.vec + (1.0 - tau) * v.vec;
  out.alpha = 1.0 / nrm;
  out.ancillas = 1 + std::max(u.ancillas, v.ancillas);
  out.eps_bound = (u.eps_bound / u.alpha + v.eps_bound / v.alpha) / nrm;
  out.depth = join_depth(u.depth, v.depth, "+");
  out.target = combo / nrm;
  if (mode == Mode::Circuit) {
    const int c = std::max(u.ancillas, v.ancillas);
    const int n = u.system_qubits();
    require_circuit_budget(1 + c + n, "ve_sum");
    CMatrix ru = ensure_realization(pad_ancillas(u, c));
    CMatrix rv = ensure_realization(pad_ancillas(v, c));
    const Eigen::Index inner = Eigen::Index{1} << (c + n);
    CMatrix rt(2, 2);
    const double st = std::sqrt(tau), ct = std::sqrt(1.0 - tau);
    rt << st, -ct, ct, st;
    CMatrix select = CMatrix::Zero(2 * inner, 2 * inner);
    select.topLeftCorner(inner, inner) = ru;
    select.bottomRightCorner(inner, inner) = rv;
    const CMatrix id_inner = CMatrix::Identity(inner, inner);
    out.realization = kron(CMatrix(rt.adjoint()), id_inner) * select * kron(rt, id_inner);
    check_realization(*out.realization, out.ancillas, out.vec, "ve_sum");
  }
  return out;
}

VectorEncoding ve_matvec(const BlockEncoding& a, const VectorEncoding& psi, Mode mode) {
  if (a.block.cols() != psi.vec.size()) throw ContractError("ve_matvec: dimensions differ");
  if (!a.target || !psi.target)
    throw ContractError("ve_matvec: operands need targets to scale the product");
  CVector image = (*a.target) * (*psi.target);
  const double nrm = image.norm();
  if (nrm < kDegenerateNorm)
    throw NumericError("ve_matvec: matrix annihilates the state");
  VectorEncoding out;
  out.vec = a.block * psi.vec;
  out.alpha = a.alpha * psi.alpha / nrm;
  out.ancillas = a.ancillas + psi.ancillas;
  out.eps_bound = (a.eps_bound + a.alpha * psi.eps_bound) / nrm;
  out.depth = join_depth(a.depth, psi.depth, "+");
  out.target = image / nrm;
  if (mode == Mode::Circuit) {
    const int n = psi.system_qubits(), aa = a.ancillas, ab = psi.ancillas;
    const int t = aa + ab + n;
    require_circuit_budget(t, "ve_matvec");
    std::vector<int> pos_a(aa), pos_p(ab);
    std::iota(pos_a.begin(), pos_a.end(), 0);
    std::iota(pos_p.begin(), pos_p.end(), aa);
    for (int q = 0; q < n; ++q) {
      pos_a.push_back(aa + ab + q);
      pos_p.push_back(aa + ab + q);
    }
    out.realization = apply_to_registers(ensure_realization(a), t, pos_a) *
                      apply_to_registers(ensure_realization(psi), t, pos_p);
    check_realization(*out.realization, out.ancillas, out.vec, "ve_matvec");
  }
  return out;
}

VectorEncoding ve_tensor(const VectorEncoding& u, const VectorEncoding& v, Mode mode) {
  VectorEncoding out;
  out.vec = kron(u.vec, v.vec);
  out.alpha = u.alpha * v.alpha;
  out.ancillas = u.ancillas + v.ancillas;
  out.eps_bound = u.eps_bound + v.eps_bound + u.eps_bound * v.eps_bound;
  out.depth = join_depth(u.depth, v.depth, "|");
  if (u.target && v.target) out.target = kron(*u.target, *v.target);
  if (mode == Mode::Circuit) {
    const int nu = u.system_qubits(), nv = v.system_qubits();
    const int a = u.ancillas, b = v.ancillas;
    const int t = a + b + nu + nv;
    require_circuit_budget(t, "ve_tensor");
    std::vector<int> pos_u(a), pos_v(b);
    std::iota(pos_u.begin(), pos_u.end(), 0);
    std::iota(pos_v.begin(), pos_v.end(), a);
    for (int q = 0; q < nu; ++q) pos_u.push_back(a + b + q);
    for (int q = 0; q < nv; ++q) pos_v.push_back(a + b + nu + q);
    out.realization = apply_to_registers(ensure_realization(u), t, pos_u) *
                      apply_to_registers(ensure_realization(v), t, pos_v);
    check_realization(*out.realization, out.ancillas, out.vec, "ve_tensor");
  }
  return out;
}

VectorEncoding ve_concat(const std::vector<VectorEncoding>& parts, Mode mode) {
  if (parts.empty() || !is_power_of_two(Eigen::Index(parts.size())))
    throw ContractError("ve_concat: part count must be a non-zero power of two");
  if (parts.size() == 1) return parts[0];
  const Eigen::Index d_count = Eigen::Index(parts.size());
  const int d = log2_exact(d_count, "ve_concat part count");
  const Eigen::Index dim = parts[0].vec.size();
  const int a = parts[0].ancillas;
  const double eps = parts[0].eps_bound;
  double inv_sq = 0.0;
  for (const auto& p : parts) {
    if (p.vec.size() != dim) throw ContractError("ve_concat: part dimensions differ");
    if (p.ancillas != a || std::abs(p.eps_bound - eps) > 1e-12)
      throw ContractError("ve_concat: parts must share ancilla count and error bound");
    inv_sq += 1.0 / (p.alpha * p.alpha);
  }
  const double nrm = std::sqrt(inv_sq);
  VectorEncoding out;
  out.vec = CVector::Zero(d_count * dim);
  for (Eigen::Index j = 0; j < d_count; ++j)
    out.vec.segment(j * dim, dim) = parts[size_t(j)].vec / double(d_count);
  out.alpha = double(d_count) / nrm;
  out.ancillas = d + a;
  out.eps_bound = eps;
  out.depth = "(" + parts[0].depth + "*" + std::to_string(d_count) + ")";
  if (std::all_of(parts.begin(), parts.end(),
                  [](const VectorEncoding& p) { return bool(p.target); })) {
    CVector t = CVector::Zero(d_count * dim);
    for (Eigen::Index j = 0; j < d_count; ++j)
      t.segment(j * dim, dim) = (*parts[size_t(j)].target) / parts[size_t(j)].alpha;
    out.target = t / nrm;
  }
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "ve_concat");
    out.realization = materialize_vec(out.vec, out.ancillas);
  }
  return out;
}

VectorEncoding ve_normalize(const VectorEncoding& u, double alpha_hint, double eps_poly,
                            Mode mode) {
  if (u.eps_bound > 0.5 + 1e-12)
    throw ContractError("ve_normalize: input error bound exceeds 1/2");
  if (alpha_hint < 1.0 - 1e-12) throw ContractError("ve_normalize: scale hint below 1");
  if (alpha_hint < u.alpha - 1e-9)
    throw ContractError("ve_normalize: scale hint below the encoding's scale");
  if (!(eps_poly > 0.0)) throw ContractError("ve_normalize: polynomial budget must be positive");
  const double nrm = u.vec.norm();
  if (nrm < 1.0 / (2.0 * alpha_hint) - 1e-12)
    throw ContractError("ve_normalize: encoded norm " + std::to_string(nrm) +
                        " below the floor 1/(2*alpha_hint)");
  const ChebyshevPoly p = sign_poly(1.0 / (2.0 * alpha_hint), eps_poly);
  const double gain = p.eval(std::min(nrm, 1.0));
  VectorEncoding out;
  out.vec = (gain / nrm) * u.vec;
  out.alpha = 1.0;
  out.ancillas = u.ancillas + 4;
  out.eps_bound = 2.0 * (u.eps_bound + eps_poly);
  out.depth = "(" + u.depth + "*" + std::to_string(p.degree()) + ")";
  out.target = u.target;
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "ve_normalize");
    out.realization = materialize_vec(out.vec, out.ancillas);
  }
  return out;
}

VectorEncoding ve_deamplify(const VectorEncoding& u, double tau, Mode mode) {
  if (tau < 1.0 - 1e-12) throw ContractError("ve_deamplify: dilution factor must be >= 1");
  VectorEncoding out = u;
  out.vec = u.vec / tau;
  out.alpha = u.alpha * tau;
  out.ancillas = u.ancillas + 2;
  out.eps_bound = u.eps_bound;
  out.depth = "(" + u.depth + "+2)";
  out.realization.reset();
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "ve_deamplify");
    out.realization = materialize_vec(out.vec, out.ancillas);
  }
  return out;
}

VectorEncoding ve_subencode(const VectorEncoding& u, int inner_ancillas,
                            double inner_alpha, double inner_eps, double drift,
                            std::optional<CVector> inner_target) {
  if (inner_ancillas < 0 || inner_ancillas > u.system_qubits())
    throw ContractError("ve_subencode: inner ancilla count out of range");
  if (inner_alpha < 1.0 - 1e-12) throw ContractError("ve_subencode: inner scale below 1");
  if (inner_eps < 0.0 || drift < 0.0)
    throw ContractError("ve_subencode: negative error parameters");
  const Eigen::Index inner_dim = u.vec.size() >> inner_ancillas;
  VectorEncoding out;
  out.vec = u.vec.head(inner_dim);
  out.alpha = u.alpha * inner_alpha;
  out.ancillas = u.ancillas + inner_ancillas;
  out.eps_bound = inner_eps + inner_alpha * (u.eps_bound + drift);
  out.depth = u.depth;
  if (inner_target) {
    if (inner_target->size() != inner_dim)
      throw ContractError("ve_subencode: inner target dimension mismatch");
    out.target = *inner_target;
  } else if (u.target) {
    CVector proxy = inner_alpha * u.target->head(inner_dim);
    if (std::abs(proxy.norm() - 1.0) <= 1e-9) out.target = proxy / proxy.norm();
  }
  return out;
}

VectorEncoding ve_traceout(const VectorEncoding& u, int b) {
  if (b < 0 || b > u.system_qubits()) throw ContractError("ve_traceout: bad register size");
  const Eigen::Index keep = u.vec.size() >> b;
  if (u.target) {
    if (u.target->tail(u.target->size() - keep).norm() > 1e-9)
      throw ContractError("ve_traceout: target does not factor as |0>⊗phi");
  } else {
    const double leak = u.alpha * u.vec.tail(u.vec.size() - keep).norm();
    if (leak > u.eps_bound + 1e-9)
      throw ContractError("ve_traceout: leading block is not numerically dominant");
  }
  VectorEncoding out;
  out.vec = u.vec.head(keep);
  out.alpha = u.alpha;
  out.ancillas = u.ancillas + b;
  out.eps_bound = u.eps_bound;
  out.depth = u.depth;
  if (u.target) out.target = u.target->head(keep);
  // The realization is unchanged: the discarded |0⟩ register simply counts
  // as one more ancilla block, and the encoded head amplitudes coincide.
  out.realization = u.realization;
  return out;
}

CMatrix extract_block(const CMatrix& realization, int ancillas) {
  if (realization.rows() != realization.cols())
    throw ContractError("extract_block: realization must be square");
  const int t = log2_exact(realization.rows(), "realization dimension");
  if (ancillas < 0 || ancillas > t) throw ContractError("extract_block: bad ancilla count");
  const Eigen::Index dim = Eigen::Index{1} << (t - ancillas);
  return realization.topLeftCorner(dim, dim);
}

CVector extract_vec(const CMatrix& realization, int ancillas) {
  if (realization.rows() != realization.cols())
    throw ContractError("extract_vec: realization must be square");
  const int t = log2_exact(realization.rows(), "realization dimension");
  if (ancillas < 0 || ancillas > t) throw ContractError("extract_vec: bad ancilla count");
  const Eigen::Index dim = Eigen::Index{1} << (t - ancillas);
  return realization.col(0).head(dim);
}

// ---------------------------------------------------------------------------
// Realization helpers.
// ---------------------------------------------------------------------------

void require_circuit_budget(int qubits, const char* where) {
  if (qubits > kMaxCircuitQubits)
    throw ContractError(std::string(where) + ": circuit mode limited to " +
                        std::to_string(kMaxCircuitQubits) + " qubits, requested " +
                        std::to_string(qubits));
}

CMatrix materialize_block(const CMatrix& block, int ancillas) {
  const int n = log2_exact(block.rows(), "block dimension");
  require_circuit_budget(ancillas + n, "materialize_block");
  if (ancillas == 0) {
    if (!is_unitary(block, 1e-10))
      throw ContractError("materialize_block: ancilla-free block must be unitary");
    return block;
  }
  return prepend_identity(unitary_dilation(block), ancillas - 1);
}

CMatrix materialize_vec(const CVector& vec, int ancillas) {
  const int n = log2_exact(vec.size(), "vector dimension");
  require_circuit_budget(ancillas + n, "materialize_vec");
  if (ancillas == 0) return unitary_from_first_column(vec);
  CMatrix col = CMatrix::Zero(vec.size(), vec.size());
  col.col(0) = vec;
  return prepend_identity(unitary_dilation(col), ancillas - 1);
}

}  // namespace qnn
