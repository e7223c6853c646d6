// Chebyshev-basis polynomial machinery: erf and sign approximants with
// modified-Bessel coefficients, T₃, and singular-value transforms of
// block-encodings.  Transforms are applied exactly on singular values;
// phase-factor synthesis is out of scope.
#pragma once

#include "qnn/encodings.hpp"

#include <vector>

namespace qnn {

enum class Parity { Even, Odd, None };

struct ChebyshevPoly {
  std::vector<double> coeffs;  // Chebyshev-T basis, coeffs[k] multiplies T_k
  Parity parity = Parity::None;
  double sup_bound = 0.0;      // certified max |P| on [-1,1]
  double certified_eps = 0.0;  // grid-certified approximation error
  double interval_c = 1.0;     // certification interval [-c, c]

  int degree() const;
  double eval(double x) const;  // Clenshaw recurrence, |x| ≤ 1
};

// Modified Bessel I_j(y)·e^{-y} for j = 0..jmax.  Log-scaled power series for
// moderate y, downward (Miller) recurrence above; either way cross-checked
// against the identity I_0(y) + 2·Σ_{j≥1} I_j(y) = e^y.
std::vector<double> bessel_i_scaled(double y, int jmax);

// Odd approximant to erf(m·x) on [-c, c]:
//   P(x) = (2m e^{-m²/2}/√π)·( I_0(m²/2)·T₁(x)
//          + Σ_j I_j(m²/2)·(-1)^j·(T_{2j+1}(x)/(2j+1) − T_{2j-1}(x)/(2j-1)) )
// truncated and grid-certified to error ≤ eps.
ChebyshevPoly erf_poly(double m, double eps, double interval_c = 1.0);

// Odd sign approximant: |P − sign| ≤ eps on [-1,-gap/2]∪[gap/2,1], |P| ≤ 1.
ChebyshevPoly sign_poly(double gap, double eps);

// T₃(x) = 4x³ − 3x.
ChebyshevPoly t3();

// Apply p to the singular values of the encoded block: U·p(Σ)·V† for odd
// parity, V·p(Σ)·V† for even.  Ledger (1, a+2, propagated input error).
BlockEncoding sv_transform(const BlockEncoding& u, const ChebyshevPoly& p,
                           Mode mode = Mode::Semantic);

// Uniform singular-value amplification by γ > 1 under the margin condition
// ‖α·block‖₂ ≤ (1−δ)/γ; ledger (1, a+1, eps).
BlockEncoding uniform_sv_amplify(const BlockEncoding& u, double gamma, double delta,
                                 double eps, Mode mode = Mode::Semantic);

// Turn an exact (2, a, 0)-block-encoding whose block has singular values in
// {0, 1/2} into a (1, a+1, 0)-block-encoding via the −T₃ transform.
BlockEncoding oblivious_aa_half(const BlockEncoding& u, Mode mode = Mode::Semantic);

}  // namespace qnn
