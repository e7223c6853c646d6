#include "qnn/qram.hpp"

#include "qnn/registers.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace qnn {

namespace {
double word_scale(int d) { return double(std::uint64_t{1} << d); }
}  // namespace

ClassicalQram make_qram(Eigen::Index addresses, int word_bits) {
  if (addresses <= 0 || !is_power_of_two(addresses))
    throw ContractError("make_qram: address count must be a power of two");
  if (word_bits < 1 || word_bits > 63) throw ContractError("make_qram: bad word width");
  return ClassicalQram{std::vector<std::uint64_t>(size_t(addresses), 0), word_bits};
}

void qram_write(ClassicalQram& q, Eigen::Index addr, std::uint64_t word) {
  if (addr < 0 || size_t(addr) >= q.words.size())
    throw ContractError("qram_write: address out of range");
  if (word >> q.word_bits)
    throw ContractError("qram_write: word exceeds the stored width");
  q.words[size_t(addr)] = word;
}

std::uint64_t qram_read(const ClassicalQram& q, Eigen::Index addr) {
  if (addr < 0 || size_t(addr) >= q.words.size())
    throw ContractError("qram_read: address out of range");
  return q.words[size_t(addr)];
}

StatePrepTree build_state_tree(const CVector& x) {
  require_pow2_dim(x, "build_state_tree");
  if (x.norm() < kDegenerateNorm)
    throw ContractError("build_state_tree: zero vector");
  StatePrepTree t;
  t.n = log2_exact(x.size(), "state dimension");
  t.leaves = x;
  t.levels.resize(size_t(t.n) + 1);
  auto& bottom = t.levels[size_t(t.n)];
  bottom.resize(size_t(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) bottom[size_t(i)] = std::norm(x(i));
  for (int l = t.n - 1; l >= 0; --l) {
    auto& cur = t.levels[size_t(l)];
    const auto& below = t.levels[size_t(l) + 1];
    cur.resize(below.size() / 2);
    for (size_t j = 0; j < cur.size(); ++j) cur[j] = below[2 * j] + below[2 * j + 1];
  }
  return t;
}

StatePrepTree update_entry(const StatePrepTree& t, Eigen::Index idx, Complex value) {
  if (idx < 0 || idx >= t.leaves.size())
    throw ContractError("update_entry: index out of range");
  StatePrepTree out = t;
  out.leaves(idx) = value;
  // Exactly n+1 nodes change: the leaf and its ancestors up to the root.
  size_t node = size_t(idx);
  out.levels[size_t(t.n)][node] = std::norm(value);
  for (int l = t.n - 1; l >= 0; --l) {
    node /= 2;
    out.levels[size_t(l)][node] =
        out.levels[size_t(l) + 1][2 * node] + out.levels[size_t(l) + 1][2 * node + 1];
  }
  return out;
}

bool tree_consistent(const StatePrepTree& t, double tol) {
  for (size_t l = 0; l + 1 < t.levels.size(); ++l)
    for (size_t j = 0; j < t.levels[l].size(); ++j)
      if (std::abs(t.levels[l][j] - t.levels[l + 1][2 * j] - t.levels[l + 1][2 * j + 1]) >
          tol * std::max(1.0, t.levels[0][0]))
        return false;
  return true;
}

VectorEncoding state_prep_ve(const StatePrepTree& t, int d, Mode mode) {
  if (d < 2 || d > 62) throw ContractError("state_prep_ve: bad angle precision");
  const Eigen::Index n_dim = t.leaves.size();
  const double root = t.levels[0][0];
  if (root < kDegenerateNorm * kDegenerateNorm)
    throw ContractError("state_prep_ve: degenerate tree");
  const double big_d = word_scale(d);

  // Walk every root-to-leaf path multiplying d-bit-quantized rotation
  // factors; phases are applied exactly at the leaves.
  CVector mags = CVector::Zero(n_dim);
  std::vector<double> amp(1, 1.0);
  for (int l = 0; l < t.n; ++l) {
    std::vector<double> next(amp.size() * 2, 0.0);
    for (size_t j = 0; j < amp.size(); ++j) {
      const double parent = t.levels[size_t(l)][j];
      double theta = 0.0;
      if (parent > 0.0) {
        const double frac =
            std::clamp(t.levels[size_t(l) + 1][2 * j] / parent, 0.0, 1.0);
        theta = std::acos(std::sqrt(frac));
      }
      const double word = std::round(theta * big_d / std::numbers::pi);
      const double qtheta = word * std::numbers::pi / big_d;
      next[2 * j] = amp[j] * std::cos(qtheta);
      next[2 * j + 1] = amp[j] * std::sin(qtheta);
    }
    amp = std::move(next);
  }
  for (Eigen::Index i = 0; i < n_dim; ++i) {
    const double mag = std::abs(t.leaves(i));
    const Complex phase = mag > 0 ? t.leaves(i) / mag : Complex(1.0, 0.0);
    mags(i) = amp[size_t(i)] * phase;
  }

  VectorEncoding out;
  out.vec = mags;
  if (out.vec.norm() > 1.0) out.vec /= out.vec.norm();
  out.alpha = 1.0;
  out.ancillas = 0;
  out.target = t.leaves / std::sqrt(root);
  const double bound = std::pow(2.0, -(d - 2)) * std::sqrt(double(n_dim));
  out.eps_bound = std::min(bound, 2.0);
  out.depth = "O(N)";
  const double actual = (*out.target - out.vec).norm();
  if (actual > out.eps_bound + 1e-9)
    throw NumericError("state_prep_ve: rounding error exceeds the d-bit model");
  if (mode == Mode::Circuit) {
    require_circuit_budget(t.n, "state_prep_ve");
    out.realization = unitary_from_first_column(out.vec / out.vec.norm());
    // The materialized preparation is exact on the quantized amplitudes up to
    // the final unit-norm completion.
    if ((extract_vec(*out.realization, 0) - out.vec).norm() > out.eps_bound + 1e-9)
      throw NumericError("state_prep_ve: realization drift");
  }
  return out;
}

CMatrix MatrixQramStructure::reconstruct() const {
  CMatrix w = CMatrix::Zero(dim(), dim());
  for (Eigen::Index j = 0; j < dim(); ++j) w.col(j) = col_norms(j) * unit_columns.col(j);
  return w;
}

double MatrixQramStructure::rounding_error() const {
  const double big_d = word_scale(d);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < col_norms.size(); ++j) {
    const double rounded = std::cos(double(angle_words[size_t(j)]) * std::numbers::pi / big_d);
    worst = std::max(worst, std::abs(col_norms(j) - rounded));
  }
  return worst;
}

MatrixQramStructure build_matrix_structure(const CMatrix& w, int d) {
  require_pow2_dims(w, "build_matrix_structure");
  if (w.rows() != w.cols()) throw ContractError("build_matrix_structure: matrix must be square");
  if (d < 2 || d > 62) throw ContractError("build_matrix_structure: bad angle precision");
  if (!w.allFinite())
    throw NumericError("build_matrix_structure: matrix has non-finite entries");
  const double norm = spectral_norm(w);
  if (norm > 1.0 + 1e-10)
    throw ContractError("build_matrix_structure: spectral norm " + std::to_string(norm) +
                        " exceeds 1; pre-scale the matrix");
  const double big_d = word_scale(d);
  MatrixQramStructure s;
  s.d = d;
  s.unit_columns = CMatrix::Zero(w.rows(), w.cols());
  s.col_norms = RVector::Zero(w.cols());
  s.angle_words.resize(size_t(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double a = std::min(w.col(j).norm(), 1.0);
    s.col_norms(j) = a;
    s.unit_columns.col(j) = a > 0 ? CVector(w.col(j) / a) : basis_state(w.rows(), j);
    const double word = std::round(std::acos(a) * big_d / std::numbers::pi);
    s.angle_words[size_t(j)] = std::uint64_t(std::min(word, big_d - 1.0));
  }
  return s;
}

VectorEncoding oracle_uw(const MatrixQramStructure& s, const VectorEncoding& psi) {
  const Eigen::Index n_dim = s.dim();
  if (psi.vec.size() != n_dim) throw ContractError("oracle_uw: dimension mismatch");
  VectorEncoding out;
  out.vec = CVector::Zero(n_dim * n_dim);
  for (Eigen::Index j = 0; j < n_dim; ++j)
    out.vec.segment(j * n_dim, n_dim) = psi.vec(j) * s.unit_columns.col(j);
  out.alpha = psi.alpha;
  out.ancillas = psi.ancillas;
  out.eps_bound = psi.eps_bound;
  out.depth = "(" + psi.depth + "+O(log^2 N))";
  if (psi.target) {
    CVector t = CVector::Zero(n_dim * n_dim);
    for (Eigen::Index j = 0; j < n_dim; ++j)
      t.segment(j * n_dim, n_dim) = (*psi.target)(j) * s.unit_columns.col(j);
    out.target = t;
  }
  return out;
}

BlockEncoding diagonal_be_from_qram(const RVector& a_values, int d, Mode mode) {
  const Eigen::Index n_dim = a_values.size();
  if (!is_power_of_two(n_dim))
    throw ContractError("diagonal_be_from_qram: dimension must be a power of two");
  if (a_values.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
    throw ContractError("diagonal_be_from_qram: diagonal magnitude exceeds 1");
  const double big_d = word_scale(d);
  std::vector<std::uint64_t> words(size_t(n_dim), 0);
  CMatrix block = CMatrix::Zero(n_dim, n_dim);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n_dim; ++j) {
    const double a = std::clamp(a_values(j), -1.0, 1.0);
    const double word = std::min(std::round(std::acos(a) * big_d / std::numbers::pi), big_d - 1.0);
    words[size_t(j)] = std::uint64_t(word);
    block(j, j) = std::cos(word * std::numbers::pi / big_d);
    worst = std::max(worst, std::abs(a - block(j, j).real()));
  }
  if (worst > std::numbers::pi / big_d + 1e-15)
    throw NumericError("diagonal_be_from_qram: rounding exceeded the pi/2^d model");
  BlockEncoding out;
  out.block = block;
  out.alpha = 1.0;
  out.ancillas = d + 1;
  out.eps_bound = worst;
  out.depth = "O(d log N)";
  out.target = CMatrix(a_values.cast<Complex>().asDiagonal());
  if (mode == Mode::Circuit) {
    const int n = log2_exact(n_dim, "diagonal dimension");
    const int total = 1 + d + n;
    require_circuit_budget(total, "diagonal_be_from_qram");
    const Eigen::Index addr_dim = Eigen::Index{1} << d;
    // U: |x>_d |j>_n -> |x xor b_j>_d |j>_n
    CMatrix u = CMatrix::Zero(addr_dim * n_dim, addr_dim * n_dim);
    for (Eigen::Index x = 0; x < addr_dim; ++x)
      for (Eigen::Index j = 0; j < n_dim; ++j)
        u((x ^ Eigen::Index(words[size_t(j)])) * n_dim + j, x * n_dim + j) = 1.0;
    // CR_Y(t): rotation of the top qubit by a·t controlled on address a.
    CMatrix cry = CMatrix::Zero(2 * addr_dim, 2 * addr_dim);
    for (Eigen::Index a = 0; a < addr_dim; ++a) {
      const double th = double(a) * std::numbers::pi / big_d;
      cry(0 * addr_dim + a, 0 * addr_dim + a) = std::cos(th);
      cry(0 * addr_dim + a, 1 * addr_dim + a) = -std::sin(th);
      cry(1 * addr_dim + a, 0 * addr_dim + a) = std::sin(th);
      cry(1 * addr_dim + a, 1 * addr_dim + a) = std::cos(th);
    }
    std::vector<int> pos_u(size_t(d + n));
    std::iota(pos_u.begin(), pos_u.end(), 1);  // address + system registers
    std::vector<int> pos_c(size_t(1 + d));
    std::iota(pos_c.begin(), pos_c.end(), 0);  // rotation + address registers
    const CMatrix uf = apply_to_registers(u, total, pos_u);
    const CMatrix cf = apply_to_registers(cry, total, pos_c);
    out.realization = uf.adjoint() * cf * uf;
    if ((extract_block(*out.realization, out.ancillas) - out.block).cwiseAbs().maxCoeff() >
        1e-10)
      throw NumericError("diagonal_be_from_qram: circuit disagrees with semantic block");
  }
  return out;
}

BlockEncoding diagonal_be_from_qram_complex(const CVector& a_values, int d, Mode mode) {
  if (a_values.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
    throw ContractError("diagonal_be_from_qram_complex: diagonal magnitude exceeds 1");
  BlockEncoding re = diagonal_be_from_qram(a_values.real(), d, mode);
  BlockEncoding im = diagonal_be_from_qram(a_values.imag(), d, mode);
  im.block *= Complex(0.0, 1.0);
  im.target = CMatrix(Complex(0.0, 1.0) * (*im.target));
  if (im.realization) im.realization = CMatrix(Complex(0.0, 1.0) * (*im.realization));
  // Harmonize the shared LCU ledger: both parts carry the worse rounding eps.
  const double eps = std::max(re.eps_bound, im.eps_bound);
  re.eps_bound = eps;
  im.eps_bound = eps;
  return be_lcu({re, im}, {1.0, 1.0}, mode);
}

CVector cr_y_load(std::uint64_t angle_word, int d) {
  if (d < 1 || d > 62) throw ContractError("cr_y_load: bad precision");
  if (angle_word >> d) throw ContractError("cr_y_load: word exceeds width");
  const double t = std::numbers::pi / word_scale(d);
  CVector state = basis_state(2, 0);
  // Cascade of controlled e^{−i 2^j t Y} over the set bits of the word.
  for (int j = 0; j < d; ++j) {
    if (!((angle_word >> j) & 1)) continue;
    const double th = double(std::uint64_t{1} << j) * t;
    CMatrix ry(2, 2);
    ry << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    state = ry * state;
  }
  return state;
}

}  // namespace qnn
