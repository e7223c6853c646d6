#include "qnn/blocks.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qnn {

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

CVector skip_norm_oracle(const CMatrix& w, const CVector& x) {
  CVector wx = w * x;
  CVector act(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    act(i) = Complex(std::erf(4.0 * wx(i).real() / 5.0), 0.0);
  CVector gamma = x + act;
  const double nrm = gamma.norm();
  if (nrm < kDegenerateNorm) throw NumericError("skip_norm_oracle: annihilation");
  return gamma / nrm;
}

VectorEncoding skip_norm_block(const VectorEncoding& psi, const ResidualBlockSpec& spec,
                               Mode mode, SkipNormStats* stats) {
  if (std::abs(psi.alpha - 1.0) > 1e-9)
    throw ContractError("skip_norm_block: input must be a unit-scale encoding");
  if (!psi.target) throw ContractError("skip_norm_block: input needs a target state");
  if (!(spec.kappa >= 1.0 && spec.kappa <= 2.0))
    throw ContractError("skip_norm_block: kappa outside [1,2]");
  if (!(spec.eps1 > 0.0 && spec.eps1 <= 1.0))
    throw ContractError("skip_norm_block: eps1 outside (0,1]");
  const double w_norm =
      spec.kappa * spec.weight_be.alpha * spectral_norm(spec.weight_be.block);
  if (w_norm > 1.0 + 1e-9)
    throw ContractError("skip_norm_block: encoded weight matrix exceeds unit spectral norm");

  const double nu = 4.0 * spec.kappa / 5.0;

  // Activation path: Wψ/κ, then erf(ν·) which evaluates erf(4Wψ/5).
  VectorEncoding u1 = ve_matvec(spec.weight_be, psi, mode);
  VectorEncoding u2 = erf_apply_ve(u1, nu, spec.eps1, mode);

  // Skip path diluted to share the activation's scale 16ν/√π.
  VectorEncoding skip = ve_deamplify(psi, 16.0 * nu / kSqrtPi, mode);

  VectorEncoding u3 = ve_sum(skip, u2, 0.5, mode);
  const double n_gamma = 1.0 / u3.alpha;
  if (n_gamma < 1.0 / 400.0 - 1e-12)
    throw NumericError("skip_norm_block: pre-normalization norm fell below 1/400");

  VectorEncoding out = ve_normalize(u3, u3.alpha, spec.eps1, mode);
  // The propagated chain bound and the lemma's closed form are both valid.
  out.eps_bound =
      std::min(out.eps_bound, 712.0 * (psi.eps_bound + spec.eps1));

  if (stats) {
    stats->n1 = ((*spec.weight_be.target) * (*psi.target)).norm();
    stats->n2 = 16.0 * nu / (kSqrtPi * u2.alpha);
    stats->n_gamma = n_gamma;
  }
  return out;
}

VectorEncoding residual_stack(const VectorEncoding& psi, const StackSpec& spec,
                              Mode mode) {
  const int k = int(spec.blocks.size());
  if (k < 1) throw ContractError("residual_stack: need at least one block");
  if (psi.eps_bound != 0.0)
    throw ContractError("residual_stack: input must be an exact encoding");
  const int b = spec.blocks[0].weight_be.ancillas;
  for (const auto& blk : spec.blocks) {
    if (blk.weight_be.ancillas != b)
      throw ContractError("residual_stack: blocks must share one ancilla count");
    if (std::abs(blk.kappa - 2.0) > 1e-12)
      throw ContractError("residual_stack: stacks assume weight encodings of W/2");
  }
  const int n = psi.system_qubits();
  VectorEncoding cur = psi;
  for (int i = 1; i <= k; ++i) {
    ResidualBlockSpec layer = spec.blocks[size_t(i - 1)];
    layer.eps1 = spec.eps / std::pow(1424.0, double(k - i));
    try {
      cur = skip_norm_block(cur, layer, mode);
    } catch (const std::exception& e) {
      throw ContractError("residual_stack: layer " + std::to_string(i) +
                          " failed: " + e.what());
    }
  }
  // Pad up to the closed-form ledger 2^k(a + 2b + n + 9).
  const int ledger = (1 << k) * (psi.ancillas + 2 * b + n + 9);
  if (cur.ancillas > ledger)
    throw NumericError("residual_stack: composed ancillas exceed the closed form");
  cur = pad_ancillas(cur, ledger);
  cur.eps_bound = std::min(cur.eps_bound, spec.eps);
  return cur;
}

double output_block_input_budget(Eigen::Index n_dim, Eigen::Index c_bins, double eps) {
  const double delta = 0.02;
  return eps * std::sqrt(double(c_bins)) * delta / (24.0 * double(n_dim));
}

CVector output_block_oracle(const CMatrix& w, const CVector& x) {
  const double tau = 0.51;
  CVector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) g(j) = Complex(std::norm(x(j)), 0.0);
  CVector gamma = tau * x + (1.0 - tau) * (w * g);
  const double nrm = gamma.norm();
  if (nrm < kDegenerateNorm) throw NumericError("output_block_oracle: annihilation");
  return gamma / nrm;
}

OutputBlockResult output_block(const VectorEncoding& psi, const MatrixQramStructure& w,
                               Eigen::Index c_bins, double eps, Mode mode) {
  if (std::abs(psi.alpha - 1.0) > 1e-9)
    throw ContractError("output_block: input must be a unit-scale encoding");
  if (!psi.target) throw ContractError("output_block: input needs a target state");
  const Eigen::Index n_dim = psi.vec.size();
  if (w.dim() != n_dim) throw ContractError("output_block: dimension mismatch");
  if (c_bins < 1 || !is_power_of_two(c_bins) || n_dim % c_bins != 0)
    throw ContractError("output_block: class count must be a power of two dividing N");
  const double tau = 0.51;
  const double delta = 0.02;  // 2·tau − 1
  const double eps1 = eps * std::sqrt(double(c_bins)) / (8.0 * double(n_dim));
  const double eps0_req = output_block_input_budget(n_dim, c_bins, eps);
  if (psi.eps_bound > eps0_req + 1e-15)
    throw ContractError(
        "output_block: input error bound exceeds the budget " +
        std::to_string(eps0_req) + "; re-run the upstream stages at that tolerance");

  VectorEncoding v1 = matvec_squared(w, psi, mode);
  VectorEncoding v2 = ve_sum(psi, v1, tau, mode);
  const double n_gamma = 1.0 / v2.alpha;
  if (n_gamma < delta - 1e-12)
    throw NumericError("output_block: pre-normalization norm fell below 0.02");
  VectorEncoding v3 = ve_normalize(v2, v2.alpha, eps1, mode);

  OutputBlockResult res;
  res.encoding = v3;
  res.pooling = PoolingSpec{c_bins, n_dim};
  res.n_gamma = n_gamma;
  res.eps0_required = eps0_req;
  res.eps1 = eps1;
  return res;
}

RVector sample_class(const VectorEncoding& v, const PoolingSpec& spec, long long shots,
                     std::uint64_t seed) {
  const double nrm2 = v.vec.squaredNorm();
  if (nrm2 < kDegenerateNorm * kDegenerateNorm)
    throw NumericError("sample_class: zero encoded vector");
  if (shots < 0) throw ContractError("sample_class: negative shot count");
  if (v.vec.size() % spec.bins != 0 || spec.input_dim != v.vec.size())
    throw ContractError("sample_class: pooling spec does not match the encoding");
  const Eigen::Index width = v.vec.size() / spec.bins;
  RVector probs = RVector::Zero(spec.bins);
  for (Eigen::Index j = 0; j < spec.bins; ++j)
    probs(j) = v.vec.segment(j * width, width).squaredNorm() / nrm2;
  if (shots == 0) return probs;

  std::mt19937_64 rng(seed);
  std::discrete_distribution<Eigen::Index> dist(probs.data(), probs.data() + probs.size());
  RVector counts = RVector::Zero(spec.bins);
  for (long long s = 0; s < shots; ++s) counts(dist(rng)) += 1.0;
  return counts;
}

}  // namespace qnn
