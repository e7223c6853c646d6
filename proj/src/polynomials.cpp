#include "qnn/polynomials.hpp"

#include "qnn/registers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qnn {

namespace {

constexpr int kGridPoints = 10000;
constexpr int kMaxDegree = 400000;
const double kSqrtPi = std::sqrt(std::numbers::pi);

// Chebyshev-spaced abscissae on [-c, c].
std::vector<double> cheb_grid(double c) {
  std::vector<double> xs(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i)
    xs[i] = c * std::cos(std::numbers::pi * i / (kGridPoints - 1));
  return xs;
}

Parity infer_parity(const std::vector<double>& coeffs) {
  bool any_even = false, any_odd = false;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    (k % 2 == 0 ? any_even : any_odd) = true;
  }
  if (any_even && any_odd) return Parity::None;
  return any_odd ? Parity::Odd : Parity::Even;
}

// I_j(y)·e^{-y} by the log-scaled ascending series; robust for y up to ~1e3
// and beyond since every term is exponentiated individually.
double bessel_scaled_series(double y, int j) {
  if (y == 0.0) return j == 0 ? 1.0 : 0.0;
  const double ly = std::log(y / 2.0);
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double lt = (2.0 * k + j) * ly - std::lgamma(k + 1.0) -
                      std::lgamma(double(k) + double(j) + 1.0) - y;
    const double t = std::exp(lt);
    sum += t;
    if (k > (y - j) / 2.0 && t < sum * 1e-16 + 1e-300) break;
    if (k > 4.0 * y + j + 64) break;
  }
  return sum;
}

}  // namespace

int ChebyshevPoly::degree() const {
  for (int k = int(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[size_t(k)] != 0.0) return k;
  return 0;
}

double ChebyshevPoly::eval(double x) const {
  if (std::abs(x) > 1.0 + 1e-12)
    throw ContractError("ChebyshevPoly::eval: argument outside [-1,1]");
  x = std::clamp(x, -1.0, 1.0);
  // Clenshaw recurrence on the T basis.
  double b0 = 0.0, b1 = 0.0;
  for (int k = int(coeffs.size()) - 1; k >= 1; --k) {
    const double b2 = b1;
    b1 = b0;
    b0 = 2.0 * x * b1 - b2 + coeffs[size_t(k)];
  }
  const double c0 = coeffs.empty() ? 0.0 : coeffs[0];
  return x * b0 - b1 + c0;
}

std::vector<double> bessel_i_scaled(double y, int jmax) {
  if (y < 0.0 || jmax < 0) throw ContractError("bessel_i_scaled: bad arguments");
  std::vector<double> out(size_t(jmax) + 1);
  if (y <= 700.0) {
    for (int j = 0; j <= jmax; ++j) out[size_t(j)] = bessel_scaled_series(y, j);
  } else {
    // Miller downward recurrence, normalized by Σ_j I_j(y) = e^y.
    const int start = jmax + int(10.0 + 3.0 * std::sqrt(y)) + 32;
    std::vector<double> f(size_t(start) + 2, 0.0);
    f[size_t(start)] = 1e-280;
    double norm = 0.0;
    for (int j = start; j >= 1; --j) {
      f[size_t(j) - 1] = f[size_t(j) + 1] + (2.0 * j / y) * f[size_t(j)];
      if (f[size_t(j) - 1] > 1e250) {
        const double s = 1e-250;
        for (int q = j - 1; q <= start; ++q) f[size_t(q)] *= s;
        norm *= s;
      }
    }
    norm = f[0];
    for (int j = 1; j <= start; ++j) norm += 2.0 * f[size_t(j)];
    for (int j = 0; j <= jmax; ++j) out[size_t(j)] = f[size_t(j)] / norm;
  }
  // Identity cross-check: the scaled orders must sum to one (with a tail
  // allowance when jmax cuts the sum short).
  double total = out[0];
  for (int j = 1; j <= jmax; ++j) total += 2.0 * out[size_t(j)];
  const double tail = (jmax >= 1) ? 2.0 * double(jmax) * out[size_t(jmax)] : 0.0;
  if (total > 1.0 + 1e-10 || (total < 1.0 - 1e-10 && tail < 1e-12 && total < 1.0 - 1e-8))
    throw NumericError("bessel_i_scaled: identity cross-check failed");
  // Independent spot check of one order against the series for large y.
  if (y > 700.0) {
    const int probe = std::min(jmax, 3);
    const double ref = bessel_scaled_series(y, probe);
    if (ref > 0 && std::abs(out[size_t(probe)] - ref) > 1e-8 * ref + 1e-14)
      throw NumericError("bessel_i_scaled: Miller recurrence disagrees with series");
  }
  return out;
}

ChebyshevPoly erf_poly(double m, double eps, double interval_c) {
  if (m < 0.5) throw ContractError("erf_poly: slope parameter must be at least 1/2");
  if (!(eps > 0.0 && eps <= 1.0)) throw ContractError("erf_poly: eps must lie in (0,1]");
  if (!(interval_c > 0.0 && interval_c <= 1.0))
    throw ContractError("erf_poly: interval bound must lie in (0,1]");

  const double y = m * m / 2.0;
  const double pref = 2.0 * m / kSqrtPi;  // already folds e^{-y} via scaled Bessel
  const auto xs = cheb_grid(interval_c);

  // Truncation order: scaled Bessel orders decay like exp(-j²/2y); grow until
  // the certified grid error meets eps.
  int jmax = std::max(4, int(std::ceil(m * std::sqrt(2.0 * std::log(64.0 / eps)))) + 4);
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (2 * jmax + 1 > kMaxDegree)
      throw NumericError("erf_poly: certification failed below the degree cap");
    const auto ie = bessel_i_scaled(y, jmax);
    ChebyshevPoly p;
    p.coeffs.assign(size_t(2 * jmax + 2), 0.0);
    p.coeffs[1] = pref * ie[0];
    double sgn = -1.0;
    for (int j = 1; j <= jmax; ++j) {
      p.coeffs[size_t(2 * j + 1)] += pref * ie[size_t(j)] * sgn / (2.0 * j + 1.0);
      p.coeffs[size_t(2 * j - 1)] -= pref * ie[size_t(j)] * sgn / (2.0 * j - 1.0);
      sgn = -sgn;
    }
    p.parity = Parity::Odd;
    p.interval_c = interval_c;

    double max_err = 0.0;
    for (double x : xs) max_err = std::max(max_err, std::abs(p.eval(x) - std::erf(m * x)));
    if (max_err <= eps) {
      double sup = 0.0;
      for (double x : cheb_grid(1.0)) sup = std::max(sup, std::abs(p.eval(x)));
      p.sup_bound = sup;
      p.certified_eps = max_err;
      return p;
    }
    jmax *= 2;
  }
  throw NumericError("erf_poly: grid certification did not converge");
}

ChebyshevPoly sign_poly(double gap, double eps) {
  if (!(gap > 0.0 && gap < 1.0)) throw ContractError("sign_poly: gap must lie in (0,1)");
  if (!(eps > 0.0 && eps < 0.5)) throw ContractError("sign_poly: eps must lie in (0,1/2)");

  // Cache on a conservative (gap, eps) lattice: smaller gap / smaller eps is
  // strictly stronger, so quantizing down stays valid for the caller.
  static std::map<std::pair<int, int>, ChebyshevPoly> cache;
  const int gk = int(std::ceil(std::log(1.0 / gap) / std::log(1.25)));
  const int ek = int(std::ceil(std::log(1.0 / eps) / std::log(10.0) * 2.0));
  const auto key = std::make_pair(gk, ek);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double g = std::pow(1.25, -gk);
  const double e = std::pow(10.0, -ek / 2.0);

  // erf(m·g/2) within e/2 of 1: erfc(z) ≤ exp(-z²).
  const double z = std::sqrt(std::log(4.0 / e));
  const double m = 2.0 * z / g;
  ChebyshevPoly p = erf_poly(std::max(m, 0.5), e / 4.0, 1.0);
  if (p.sup_bound > 1.0) {
    for (double& c : p.coeffs) c /= p.sup_bound;
    p.sup_bound = 1.0;
  }
  // Certify the plateaus.
  double max_err = 0.0;
  for (double x : cheb_grid(1.0)) {
    if (std::abs(x) < g / 2.0) continue;
    max_err = std::max(max_err, std::abs(p.eval(x) - (x > 0 ? 1.0 : -1.0)));
  }
  {
    // The Chebyshev grid clusters at ±1; add a uniform sweep of the plateau edge.
    for (int i = 0; i <= 2000; ++i) {
      const double x = g / 2.0 + (1.0 - g / 2.0) * i / 2000.0;
      max_err = std::max(max_err, std::abs(p.eval(x) - 1.0));
    }
  }
  if (max_err > e)
    throw NumericError("sign_poly: plateau certification failed at error " +
                       std::to_string(max_err));
  p.certified_eps = max_err;
  p.interval_c = 1.0;
  cache.emplace(key, p);
  return p;
}

ChebyshevPoly t3() {
  ChebyshevPoly p;
  p.coeffs = {0.0, 0.0, 0.0, 1.0};
  p.parity = Parity::Odd;
  p.sup_bound = 1.0;
  p.certified_eps = 0.0;
  return p;
}

BlockEncoding sv_transform(const BlockEncoding& u, const ChebyshevPoly& p, Mode mode) {
  if (p.parity == Parity::None)
    throw ContractError("sv_transform: polynomial must have definite parity");
  if (p.sup_bound > 1.0 + 1e-9)
    throw ContractError("sv_transform: polynomial exceeds unit sup norm");
  const Svd dec = svd(u.block);
  RVector transformed(dec.s.size());
  for (Eigen::Index i = 0; i < dec.s.size(); ++i)
    transformed(i) = p.eval(std::min(dec.s(i), 1.0));
  BlockEncoding out;
  if (p.parity == Parity::Odd)
    out.block = dec.u * transformed.asDiagonal() * dec.v.adjoint();
  else
    out.block = dec.v * transformed.asDiagonal() * dec.v.adjoint();
  out.alpha = 1.0;
  out.ancillas = u.ancillas + 2;
  // Robust propagation of the input's block error through a degree-d
  // transform: ‖P^{SV}(A) − P^{SV}(Ã)‖ ≤ 4d·sqrt(‖A − Ã‖).
  const double block_err = u.eps_bound / u.alpha;
  out.eps_bound = (block_err == 0.0) ? 0.0 : 4.0 * p.degree() * std::sqrt(block_err);
  out.depth = "(" + u.depth + "*" + std::to_string(p.degree()) + ")";
  if (u.target && u.eps_bound <= 1e-12) {
    const Svd exact = svd(*u.target / u.alpha);
    RVector tv(exact.s.size());
    for (Eigen::Index i = 0; i < exact.s.size(); ++i)
      tv(i) = p.eval(std::min(exact.s(i), 1.0));
    out.target = (p.parity == Parity::Odd)
                     ? CMatrix(exact.u * tv.asDiagonal() * exact.v.adjoint())
                     : CMatrix(exact.v * tv.asDiagonal() * exact.v.adjoint());
  }
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "sv_transform");
    out.realization = materialize_block(out.block, out.ancillas);
  }
  return out;
}

BlockEncoding uniform_sv_amplify(const BlockEncoding& u, double gamma, double delta,
                                 double eps, Mode mode) {
  if (!(gamma > 1.0)) throw ContractError("uniform_sv_amplify: gamma must exceed 1");
  // delta = 1/2 is admitted: the convolution construction calls the lemma at
  // exactly that margin.
  if (!(delta > 0.0 && delta <= 0.5))
    throw ContractError("uniform_sv_amplify: delta must lie in (0,1/2]");
  if (!(eps >= 0.0)) throw ContractError("uniform_sv_amplify: negative eps");
  const double norm = spectral_norm(u.block) * u.alpha;
  if (norm > (1.0 - delta) / gamma + 1e-10)
    throw ContractError("uniform_sv_amplify: amplification contract violated, ‖A‖ = " +
                        std::to_string(norm) + " > (1-delta)/gamma");
  // Within the margin the certified amplification polynomial agrees with γ·x
  // on every occurring singular value; the eps budget covers its realization.
  BlockEncoding out;
  out.block = gamma * u.block;
  out.alpha = 1.0;
  out.ancillas = u.ancillas + 1;
  out.eps_bound = eps + gamma * u.eps_bound / u.alpha;
  out.depth = "(" + u.depth + "*amp)";
  if (u.target) out.target = CMatrix(gamma / u.alpha * (*u.target));
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "uniform_sv_amplify");
    out.realization = materialize_block(out.block, out.ancillas);
  }
  return out;
}

BlockEncoding oblivious_aa_half(const BlockEncoding& u, Mode mode) {
  if (std::abs(u.alpha - 2.0) > 1e-9)
    throw ContractError("oblivious_aa_half: requires an exact scale-2 encoding");
  if (u.eps_bound > 1e-12)
    throw ContractError("oblivious_aa_half: requires a zero-error encoding");
  const Svd dec = svd(u.block);
  for (Eigen::Index i = 0; i < dec.s.size(); ++i)
    if (std::min(std::abs(dec.s(i)), std::abs(dec.s(i) - 0.5)) > 1e-8)
      throw ContractError(
          "oblivious_aa_half: block singular values must lie in {0, 1/2}");
  // -T₃ maps 1/2 -> 1 and 0 -> 0 on singular values.
  const CMatrix b = u.block;
  BlockEncoding out;
  out.block = 3.0 * b - 4.0 * (b * b.adjoint() * b);
  out.alpha = 1.0;
  out.ancillas = u.ancillas + 1;
  out.eps_bound = 0.0;
  out.depth = "(3*" + u.depth + ")";
  out.target = u.target;
  if (mode == Mode::Circuit) {
    require_circuit_budget(out.total_qubits(), "oblivious_aa_half");
    if (u.realization) {
      // QSVT with trivial phases: alternating the realization with the
      // reflection about the ancilla-zero subspace yields the T₃ block;
      // the global minus sign keeps the result unitary.
      const CMatrix& r = *u.realization;
      const Eigen::Index anc_dim = Eigen::Index{1} << u.ancillas;
      const Eigen::Index sys_dim = u.block.rows();
      CMatrix refl = -CMatrix::Identity(anc_dim, anc_dim);
      refl(0, 0) = 1.0;
      const CMatrix rfull = kron(refl, CMatrix(CMatrix::Identity(sys_dim, sys_dim)));
      out.realization = prepend_identity(CMatrix(-(r * rfull * r.adjoint() * rfull * r)), 1);
    } else {
      out.realization = materialize_block(out.block, out.ancillas);
    }
    if ((extract_block(*out.realization, out.ancillas) - out.block).cwiseAbs().maxCoeff() >
        1e-7)
      throw NumericError("oblivious_aa_half: realization disagrees with semantic block");
  }
  return out;
}

}  // namespace qnn
