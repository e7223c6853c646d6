#include "qnn/pipeline.hpp"

#include "qnn/qram.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qnn {

namespace {

Eigen::Index next_pow2(Eigen::Index x) {
  Eigen::Index p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Angle resolution of regime-1 state preparation; fine enough that the
// quantization distance is negligible against any epsilon ≥ 1e-6.
constexpr int kPrepAngleBits = 30;

Eigen::Index padded_path_dim(const NetworkSpec& spec) {
  return next_pow2(spec.channels_in) << (2 * spec.m);
}

Eigen::Index total_dim(const NetworkSpec& spec) {
  Eigen::Index d = 1;
  for (int p = 0; p < spec.d_paths; ++p) d *= padded_path_dim(spec);
  return d * spec.channel_fanout;
}

// Image-side exponent the convolution layers act at: the fanned-out register
// is reinterpreted as kernel.channels × 2^{m_eff} × 2^{m_eff}.
int effective_m(const NetworkSpec& spec) {
  const Eigen::Index dim = total_dim(spec);
  const Eigen::Index c = spec.kernels.at(0).channels;
  if (dim % c != 0) throw ContractError("spec: kernel channels do not divide the state");
  const int pix = log2_exact(dim / c, "pixel register");
  if (pix % 2 != 0)
    throw ContractError("spec: fanned-out state is not a square image per channel");
  return pix / 2;
}

StageRecord make_record(const std::string& stage, const VectorEncoding& v,
                        double norm_floor, double floor_min) {
  StageRecord r;
  r.stage = stage;
  r.alpha = v.alpha;
  r.ancillas = v.ancillas;
  r.eps_bound = v.eps_bound;
  r.eps_actual = v.target ? v.actual_error() : 0.0;
  r.norm_floor = norm_floor;
  r.passed = (r.eps_actual <= r.eps_bound + 1e-9) && (norm_floor >= floor_min - 1e-12);
  return r;
}

}  // namespace

void validate_spec(const NetworkSpec& spec) {
  if (spec.m < 1 || spec.m > 6) throw ContractError("spec: m outside [1,6]");
  if (spec.channels_in < 1) throw ContractError("spec: channels_in < 1");
  if (!is_power_of_two(spec.channel_fanout))
    throw ContractError("spec: channel_fanout must be a power of two");
  if (spec.regime < 1 || spec.regime > 3) throw ContractError("spec: regime must be 1, 2 or 3");
  if (spec.regime == 1 && spec.d_paths != 1)
    throw ContractError("spec: regime 1 uses a single input path");
  if (spec.regime != 1 && spec.d_paths < 2)
    throw ContractError("spec: tensor-product regimes need d_paths >= 2");
  if (spec.regime == 3 && spec.final_w)
    throw ContractError("spec: regime 3 carries no final linear layer");
  if (spec.regime != 3 && !spec.final_w)
    throw ContractError("spec: regimes 1 and 2 need a final linear layer");
  if (spec.k < 1 || int(spec.kernels.size()) != spec.k)
    throw ContractError("spec: need exactly k kernels");
  for (const auto& kern : spec.kernels)
    if (kern.channels != spec.kernels[0].channels || kern.width != spec.kernels[0].width)
      throw ContractError("spec: residual layers must share one kernel shape");
  if (std::abs(spec.tau - 0.51) > 1e-12)
    throw ContractError("spec: the output mixing weight is fixed at 0.51");
  if (!(spec.epsilon > 0.0 && spec.epsilon <= 1.0))
    throw ContractError("spec: epsilon outside (0,1]");
  const Eigen::Index dim = total_dim(spec);
  if (!is_power_of_two(spec.c_bins) || spec.c_bins < 1 || dim % spec.c_bins != 0)
    throw ContractError("spec: class count must be a power of two dividing the state");
  const int m_eff = effective_m(spec);
  if (spec.kernels[0].width > (Eigen::Index(1) << m_eff))
    throw ContractError("spec: kernel wider than the image");
  if (spec.final_w) {
    if (spec.final_w->rows() != dim || spec.final_w->cols() != dim)
      throw ContractError("spec: final layer dimension mismatch");
    if (spectral_norm(*spec.final_w) > 1.0 + 1e-9)
      throw ContractError("spec: final layer must be spectrally sub-normalized");
  }
}

NetworkInput random_network_input(const NetworkSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index raw = spec.channels_in << (2 * spec.m);
  NetworkInput in;
  for (int p = 0; p < spec.d_paths; ++p) {
    CVector x(raw);
    for (Eigen::Index i = 0; i < raw; ++i) x(i) = Complex(gauss(rng), 0.0);
    in.paths.push_back(x / x.norm());
  }
  return in;
}

CVector assemble_input(const NetworkSpec& spec, const NetworkInput& input) {
  if (int(input.paths.size()) != spec.d_paths)
    throw ContractError("input: path count does not match d_paths");
  const Eigen::Index raw = spec.channels_in << (2 * spec.m);
  const Eigen::Index pdim = padded_path_dim(spec);
  CVector x;
  for (int p = 0; p < spec.d_paths; ++p) {
    const CVector& path = input.paths[size_t(p)];
    if (path.size() != raw) throw ContractError("input: path dimension mismatch");
    if (std::abs(path.norm() - 1.0) > 1e-9)
      throw ContractError("input: paths must be unit-normalized");
    CVector padded = CVector::Zero(pdim);
    padded.head(raw) = path;
    x = (p == 0) ? padded : CVector(kron(x, padded));
  }
  if (spec.channel_fanout > 1) {
    CVector uni = CVector::Constant(spec.channel_fanout,
                                    Complex(1.0 / std::sqrt(double(spec.channel_fanout)), 0.0));
    x = kron(uni, x);
  }
  return x;
}

RVector classical_forward(const NetworkSpec& spec, const NetworkInput& input) {
  validate_spec(spec);
  CVector x = assemble_input(spec, input);
  const int m_eff = effective_m(spec);
  for (int i = 0; i < spec.k; ++i) {
    ConvMatrix cm = conv_matrix_form(spec.kernels[size_t(i)], m_eff);
    CMatrix w = cm.c_mat / cm.spectral_norm;
    x = skip_norm_oracle(w, x);
  }
  if (spec.regime != 3) x = output_block_oracle(*spec.final_w, x);
  CVector pooled = pool_l2sq(x, PoolingSpec{spec.c_bins, x.size()});
  return pooled.real();
}

VectorEncoding bilinear_input(const std::vector<CVector>& paths, int d_paths, Mode mode) {
  if (int(paths.size()) != d_paths || d_paths < 1)
    throw ContractError("bilinear_input: path count mismatch");
  for (const auto& p : paths)
    if (p.size() != paths[0].size())
      throw ContractError("bilinear_input: paths must share one dimension");
  VectorEncoding out = ve_exact(paths[0], mode);
  for (int p = 1; p < d_paths; ++p)
    out = ve_tensor(out, ve_exact(paths[size_t(p)], mode), mode);
  return out;
}

InferenceReport quantum_forward(const NetworkSpec& spec, const NetworkInput& input,
                                long long shots, Mode mode) {
  validate_spec(spec);
  InferenceReport rep;
  rep.shots = shots;
  rep.epsilon = spec.epsilon;
  rep.y_classical = classical_forward(spec, input);

  const Eigen::Index n_total = total_dim(spec);
  const int m_eff = effective_m(spec);

  // Input preparation.
  VectorEncoding psi;
  if (spec.regime == 1) {
    const Eigen::Index pdim = padded_path_dim(spec);
    CVector padded = CVector::Zero(pdim);
    padded.head(input.paths[0].size()) = input.paths[0];
    StatePrepTree tree = build_state_tree(padded);
    psi = state_prep_ve(tree, kPrepAngleBits, mode);
    rep.stages.push_back(make_record("input-prep", psi, 1.0, 0.0));
    // Downstream stages run on the exactly-known prepared state; the
    // quantization distance stays accounted in the record above.
    psi.target = psi.vec;
    psi.eps_bound = 0.0;
  } else {
    std::vector<CVector> padded;
    const Eigen::Index pdim = padded_path_dim(spec);
    for (const auto& p : input.paths) {
      CVector v = CVector::Zero(pdim);
      v.head(p.size()) = p;
      padded.push_back(v);
    }
    psi = bilinear_input(padded, spec.d_paths, mode);
    rep.stages.push_back(make_record("input-prep", psi, 1.0, 0.0));
  }
  if (spec.channel_fanout > 1) {
    CVector uni = CVector::Constant(spec.channel_fanout,
                                    Complex(1.0 / std::sqrt(double(spec.channel_fanout)), 0.0));
    psi = ve_tensor(ve_exact(uni, mode), psi, mode);
    rep.stages.push_back(make_record("fanout", psi, 1.0, 0.0));
  }

  // Top-down error budgeting.
  double eps_stack;
  int d_final = kDefaultAngleBits;
  if (spec.regime == 3) {
    eps_stack = spec.epsilon * std::sqrt(double(spec.c_bins)) / (2.0 * double(n_total) * double(n_total));
  } else {
    const double eps0_req = output_block_input_budget(n_total, spec.c_bins, spec.epsilon);
    eps_stack = eps0_req / 2.0;
    while (std::numbers::pi / std::pow(2.0, d_final) > eps0_req / 4.0 && d_final < 48)
      ++d_final;
  }

  // Residual stack with the geometric per-layer schedule.
  const int a0 = psi.ancillas;
  const int n_sys = psi.system_qubits();
  int b_anc = 0;
  VectorEncoding cur = psi;
  for (int i = 1; i <= spec.k; ++i) {
    BlockEncoding conv_be = conv_block_encoding(spec.kernels[size_t(i - 1)], m_eff, mode);
    b_anc = conv_be.ancillas;
    ResidualBlockSpec blk;
    blk.weight_be = conv_be;
    blk.kappa = 2.0;
    blk.eps1 = eps_stack / std::pow(1424.0, double(spec.k - i));
    SkipNormStats stats;
    cur = skip_norm_block(cur, blk, mode, &stats);
    rep.stages.push_back(
        make_record("layer-" + std::to_string(i), cur, stats.n_gamma, 1.0 / 400.0));
  }
  const int ledger = (1 << spec.k) * (a0 + 2 * b_anc + n_sys + 9);
  if (cur.ancillas <= ledger) cur = pad_ancillas(cur, ledger);
  cur.eps_bound = std::min(cur.eps_bound, eps_stack);
  rep.stages.push_back(make_record("stack", cur, 1.0, 0.0));

  // Optional final linear-pooling layer.
  VectorEncoding final_enc;
  PoolingSpec pool{spec.c_bins, n_total};
  if (spec.regime != 3) {
    MatrixQramStructure s = build_matrix_structure(*spec.final_w, d_final);
    OutputBlockResult res = output_block(cur, s, spec.c_bins, spec.epsilon, mode);
    rep.stages.push_back(make_record("output", res.encoding, res.n_gamma, 0.02));
    final_enc = res.encoding;
    pool = res.pooling;
  } else {
    final_enc = cur;
  }

  rep.y_quantum = sample_class(final_enc, pool, 0, 0);
  if (shots > 0) rep.histogram = sample_class(final_enc, pool, shots, spec.seed);

  rep.final_error = std::sqrt((rep.y_quantum - rep.y_classical).squaredNorm());
  Eigen::Index aq = 0, ac = 0;
  rep.y_quantum.maxCoeff(&aq);
  rep.y_classical.maxCoeff(&ac);
  rep.argmax_match = (aq == ac);
  bool stages_ok = true;
  for (const auto& st : rep.stages) stages_ok = stages_ok && st.passed;
  rep.passed = stages_ok && rep.final_error <= spec.epsilon;
  return rep;
}

CompareSummary compare_report(const InferenceReport& report, const RVector& y) {
  if (report.y_quantum.size() != y.size())
    throw ContractError("compare_report: class-count mismatch");
  CompareSummary s;
  s.l2 = std::sqrt((report.y_quantum - y).squaredNorm());
  s.l1 = (report.y_quantum - y).cwiseAbs().sum();
  Eigen::Index aq = 0, ac = 0;
  report.y_quantum.maxCoeff(&aq);
  y.maxCoeff(&ac);
  s.argmax_match = (aq == ac);
  s.passed = s.l2 <= report.epsilon;
  return s;
}

}  // namespace qnn
