#include "qnn/nonlinear.hpp"

#include <cmath>
#include <numbers>

namespace qnn {

namespace {

// Require an (approximately) real vector and return its real part.
RVector real_part_checked(const CVector& v, const char* where) {
  if (v.imag().cwiseAbs().maxCoeff() > 1e-9)
    throw ContractError(std::string(where) + ": encoding must be real-valued");
  return v.real();
}

}  // namespace

VectorEncoding nlat_ve(const VectorEncoding& u, const ChebyshevPoly& p,
                       const NlatMeta& meta, Mode mode) {
  if (!u.target) throw ContractError("nlat_ve: input needs a target state");
  if (std::abs(p.eval(0.0)) > 1e-14) throw ContractError("nlat_ve: polynomial must vanish at 0");
  if (!(meta.lipschitz > 0.0) || !(meta.gamma_bound > 0.0) || !(meta.eps1 >= 0.0))
    throw ContractError("nlat_ve: bad function metadata");
  const RVector target = real_part_checked(*u.target, "nlat_ve");
  const RVector col = real_part_checked(u.vec, "nlat_ve");
  // Certify the slope bound γ̃ ≥ max |p(x)/x| on a grid.
  for (int i = 1; i <= 2000; ++i) {
    const double x = double(i) / 2000.0;
    const double ratio = std::max(std::abs(p.eval(x) / x), std::abs(p.eval(-x) / x));
    if (ratio > meta.gamma_bound + 1e-9)
      throw ContractError("nlat_ve: gamma_bound below max |p(x)/x|");
  }
  auto f = meta.f ? meta.f : [&p](double x) { return p.eval(x); };

  const Eigen::Index n_dim = u.vec.size();
  RVector image(n_dim);
  for (Eigen::Index i = 0; i < n_dim; ++i) image(i) = f(target(i) / u.alpha);
  const double nrm = image.norm();
  if (nrm < kDegenerateNorm) throw NumericError("nlat_ve: transformed state vanishes");

  VectorEncoding out;
  out.vec = CVector::Zero(n_dim);
  for (Eigen::Index i = 0; i < n_dim; ++i)
    out.vec(i) = Complex(p.eval(col(i)) / (4.0 * meta.gamma_bound), 0.0);
  out.alpha = 4.0 * meta.gamma_bound / nrm;
  out.ancillas = u.system_qubits() + 2 * u.ancillas + 4;
  out.eps_bound = meta.lipschitz * (u.eps_bound + meta.eps1) / nrm;
  out.depth = "(deg(p)*(" + u.depth + "))";
  out.target = (image / nrm).cast<Complex>();
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "nlat_ve");
    out.realization = materialize_vec(out.vec, out.ancillas);
  }
  return out;
}

VectorEncoding erf_apply_ve(const VectorEncoding& u, double nu, double eps1, Mode mode) {
  if (!(nu >= 0.5)) throw ContractError("erf_apply_ve: nu must be at least 1/2");
  if (!(eps1 > 0.0 && eps1 <= 2.0)) throw ContractError("erf_apply_ve: eps1 outside (0, 2]");
  const double sqrt_n = std::sqrt(double(u.vec.size()));
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  NlatMeta meta;
  meta.lipschitz = 2.0 * nu / sqrt_pi;
  meta.gamma_bound = 4.0 * nu / sqrt_pi;
  meta.eps1 = eps1;
  meta.f = [nu](double x) { return std::erf(nu * x); };
  const ChebyshevPoly p = erf_poly(nu, nu * eps1 / (10.0 * sqrt_n));
  VectorEncoding out = nlat_ve(u, p, meta, mode);
  // Norm floor: |erf(νx)| ≥ |x|/2 for ν ≥ 1/2, so 𝒩 ≥ 1/(2α).
  const double nrm = 4.0 * meta.gamma_bound / out.alpha;  // = 𝒩
  if (nrm < 1.0 / (2.0 * u.alpha) - 1e-12)
    throw NumericError("erf_apply_ve: norm floor 1/(2*alpha) violated");
  // Both the propagated bound and the lemma's closed form are valid; keep
  // the tighter one.
  out.eps_bound = std::min(out.eps_bound, 2.0 * nu * u.alpha * (u.eps_bound + eps1));
  return out;
}

VectorEncoding matvec_squared(const MatrixQramStructure& s, const VectorEncoding& psi,
                              Mode mode) {
  const Eigen::Index n_dim = s.dim();
  if (psi.vec.size() != n_dim) throw ContractError("matvec_squared: dimension mismatch");
  if (!psi.target) throw ContractError("matvec_squared: input needs a target state");

  // Diagonal block-encoding of the column norms a_j read from the structure.
  BlockEncoding ua = diagonal_be_from_qram(s.col_norms, s.d, mode);

  // V1: encoding of ψ₁/𝒩₁ with ψ₁ = diag(a)·ψ.
  VectorEncoding v1 = ve_matvec(ua, psi, mode);
  const CVector psi1 = (*ua.target) * (*psi.target);
  const double n1 = psi1.norm();

  // Rank-one flip: block-encode the projector |0⟩⟨ψ₁| from V1's column.
  BlockEncoding v2;
  v2.block = basis_state(n_dim, 0) * v1.vec.adjoint();
  v2.alpha = psi.alpha;
  v2.ancillas = v1.ancillas + 2;
  v2.eps_bound = n1 * v1.eps_bound;
  v2.depth = "(" + v1.depth + "+2)";
  v2.target = basis_state(n_dim, 0) * psi1.adjoint();
  if (mode == Mode::Circuit) {
    require_circuit_budget(v2.total_qubits(), "matvec_squared");
    v2.realization = materialize_block(v2.block, v2.ancillas);
  }

  // Tensor with the identity so the projector acts on the address register
  // of the entangled column state Σ_j ψ_j |j⟩|w_j⟩.
  BlockEncoding v3 =
      be_tensor(v2, be_from_unitary(CMatrix::Identity(n_dim, n_dim), mode), mode);
  VectorEncoding phi = oracle_uw(s, psi);
  if (mode == Mode::Circuit && !phi.realization)
    phi.realization = materialize_vec(phi.vec, phi.ancillas);

  VectorEncoding folded = ve_matvec(v3, phi, mode);
  VectorEncoding out = ve_traceout(folded, log2_exact(n_dim, "matvec dimension"));
  out.depth = "O(T_psi + d n + n^2)";
  return out;
}

CVector pool_l2sq(const CVector& x, const PoolingSpec& spec) {
  if (spec.bins < 1 || spec.input_dim != x.size() || x.size() % spec.bins != 0)
    throw ContractError("pool_l2sq: bins must divide the input dimension");
  const Eigen::Index width = x.size() / spec.bins;
  CVector out = CVector::Zero(spec.bins);
  for (Eigen::Index j = 0; j < spec.bins; ++j)
    out(j) = Complex(x.segment(j * width, width).squaredNorm(), 0.0);
  return out;
}

double pool_error_bound(Eigen::Index n_dim, Eigen::Index c_bins, double eps) {
  if (n_dim < 1 || c_bins < 1) throw ContractError("pool_error_bound: bad dimensions");
  return 2.0 * double(n_dim) * eps / std::sqrt(double(c_bins));
}

}  // namespace qnn
