#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnn/polynomials.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace qnn;
using testgen::Rng;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_CASE("bessel identity cross-check") {
  for (double y : {0.125, 0.5, 2.0, 40.0, 650.0, 900.0, 5000.0}) {
    int jmax = int(std::sqrt(2.0 * y * 40.0)) + 24;
    auto ie = bessel_i_scaled(y, jmax);
    double total = ie[0];
    for (int j = 1; j <= jmax; ++j) total += 2.0 * ie[size_t(j)];
    CHECK(std::abs(total - 1.0) <= 1e-9);
    for (double v : ie) CHECK(v >= 0.0);
  }
}

TEST_CASE("erf_poly approximates erf(mx) with P(0)=0") {
  for (double m : {0.5, 0.8, 1.6}) {
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      ChebyshevPoly p = erf_poly(m, eps);
      CHECK(p.parity == Parity::Odd);
      CHECK(p.eval(0.0) == 0.0);  // odd T-basis polynomial vanishes exactly at 0
      double max_err = 0.0;
      for (int i = 0; i <= 5000; ++i) {
        double x = -1.0 + 2.0 * i / 5000.0;
        max_err = std::max(max_err, std::abs(p.eval(x) - std::erf(m * x)));
      }
      CHECK(max_err <= eps);
    }
  }
}

TEST_CASE("erf_poly slope and Lipschitz bounds") {
  for (double m : {0.5, 0.8, 1.6}) {
    const double eps = 1e-6;
    ChebyshevPoly p = erf_poly(m, eps);
    // |P(x)/x| <= 4m/sqrt(pi)
    for (int i = 1; i <= 4000; ++i) {
      double x = double(i) / 4000.0;
      CHECK(std::abs(p.eval(x) / x) <= 4.0 * m / kSqrtPi + 1e-9);
    }
    // finite-difference Lipschitz constant <= 2m/sqrt(pi) + 10 eps
    double lip = 0.0;
    double prev = p.eval(-1.0);
    for (int i = 1; i <= 20000; ++i) {
      double x = -1.0 + 2.0 * i / 20000.0;
      double cur = p.eval(x);
      lip = std::max(lip, std::abs(cur - prev) / (2.0 / 20000.0));
      prev = cur;
    }
    CHECK(lip <= 2.0 * m / kSqrtPi + 10.0 * eps);
  }
}

TEST_CASE("erf slope floor: min |erf(mx)/x| >= 1/2") {
  for (double m : {0.5, 0.8, 1.6}) {
    for (int i = 0; i <= 200; ++i) {
      double x = std::pow(10.0, -6.0 + 6.0 * i / 200.0);  // log-spaced in (0,1]
      CHECK(std::erf(m * x) / x >= 0.5 - 1e-12);
    }
  }
}

TEST_CASE("sign_poly plateaus") {
  ChebyshevPoly p = sign_poly(0.5, 1e-4);
  CHECK(p.parity == Parity::Odd);
  CHECK(p.eval(1.0) <= 1.0 + 1e-12);
  CHECK(p.eval(1.0) >= 1.0 - 1e-4);
  for (int i = 0; i <= 2000; ++i) {
    double x = 0.25 + 0.75 * i / 2000.0;
    CHECK(std::abs(p.eval(x) - 1.0) <= 1e-4);
    CHECK(std::abs(p.eval(-x) + 1.0) <= 1e-4);
  }
  for (int i = 0; i <= 2000; ++i) {
    double x = -1.0 + 2.0 * i / 2000.0;
    CHECK(std::abs(p.eval(x)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("t3 fixed values") {
  ChebyshevPoly p = t3();
  CHECK(p.eval(1.0) == doctest::Approx(1.0));
  CHECK(p.eval(0.5) == doctest::Approx(-1.0));
  CHECK(p.eval(0.0) == doctest::Approx(0.0));
  CHECK(p.degree() == 3);
}

TEST_CASE("sv_transform identity, T3, and even square") {
  Rng rng(41);
  BlockEncoding u = testgen::random_be(rng, 4, 1.0, 0.0, 1);
  ChebyshevPoly linear;
  linear.coeffs = {0.0, 1.0};
  linear.parity = Parity::Odd;
  linear.sup_bound = 1.0;
  BlockEncoding same = sv_transform(u, linear);
  CHECK((same.block - u.block).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(same.ancillas == u.ancillas + 2);
  CHECK(same.alpha == 1.0);

  // All singular values 1/2 -> T3 gives magnitude 1.
  CMatrix half = 0.5 * testgen::random_unitary(rng, 4);
  BlockEncoding hbe;
  hbe.block = half;
  hbe.alpha = 1.0;
  hbe.ancillas = 0;
  hbe.eps_bound = 0.0;
  BlockEncoding t = sv_transform(hbe, t3());
  Svd s = svd(t.block);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.s(i) - 1.0) <= 1e-10);

  // Even square on a diagonal block.
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.25;
  BlockEncoding dbe;
  dbe.block = d;
  dbe.alpha = 1.0;
  dbe.ancillas = 0;
  dbe.eps_bound = 0.0;
  ChebyshevPoly sq;
  sq.coeffs = {0.5, 0.0, 0.5};  // x^2 = (T0 + T2)/2
  sq.parity = Parity::Even;
  sq.sup_bound = 1.0;
  BlockEncoding dsq = sv_transform(dbe, sq);
  Svd ds = svd(dsq.block);
  CHECK(ds.s(0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(ds.s(1) == doctest::Approx(0.0625).epsilon(1e-10));
}

TEST_CASE("sv_transform composition on diagonal blocks") {
  CMatrix d = CMatrix::Zero(4, 4);
  d(0, 0) = 0.9;
  d(1, 1) = 0.5;
  d(2, 2) = 0.3;
  d(3, 3) = 0.1;
  BlockEncoding dbe;
  dbe.block = d;
  dbe.alpha = 1.0;
  dbe.ancillas = 0;
  dbe.eps_bound = 0.0;
  ChebyshevPoly pt3 = t3();
  BlockEncoding once = sv_transform(dbe, pt3);
  BlockEncoding twice = sv_transform(once, pt3);
  Svd s = svd(twice.block);
  // compare with T3(T3(x)) applied to each singular value
  std::vector<double> expect;
  for (double x : {0.9, 0.5, 0.3, 0.1}) {
    double y = 4 * x * x * x - 3 * x;
    double z = 4 * y * y * y - 3 * y;
    expect.push_back(std::abs(z));
  }
  std::sort(expect.begin(), expect.end(), std::greater<>());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.s(i) - expect[size_t(i)]) <= 1e-9);
}

TEST_CASE("sv_transform contracts") {
  Rng rng(42);
  BlockEncoding u = testgen::random_be(rng, 4, 1.0, 0.0, 0);
  ChebyshevPoly bad;
  bad.coeffs = {0.3, 1.0};  // mixed parity
  bad.parity = Parity::None;
  bad.sup_bound = 1.0;
  CHECK_THROWS_AS(sv_transform(u, bad), ContractError);

  ChebyshevPoly big;
  big.coeffs = {0.0, 2.0};
  big.parity = Parity::Odd;
  big.sup_bound = 2.0;
  CHECK_THROWS_AS(sv_transform(u, big), ContractError);
}

TEST_CASE("uniform_sv_amplify scaling and contract") {
  CMatrix d = 0.2 * CMatrix::Identity(2, 2);
  BlockEncoding u;
  u.block = d;
  u.alpha = 1.0;
  u.ancillas = 1;
  u.eps_bound = 0.0;
  u.target = d;
  BlockEncoding amp = uniform_sv_amplify(u, 2.0, 0.5, 1e-9);
  CHECK(amp.alpha == 1.0);
  CHECK(amp.ancillas == 2);
  CHECK((amp.block - 0.4 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(amp.eps_bound == doctest::Approx(1e-9));

  // gamma -> 1+ leaves the block unchanged within eps.
  BlockEncoding near = uniform_sv_amplify(u, 1.0 + 1e-12, 0.25, 1e-9);
  CHECK((near.block - d).cwiseAbs().maxCoeff() <= 1e-9);

  // margin violation
  BlockEncoding wide;
  wide.block = 0.9 * CMatrix::Identity(2, 2);
  wide.alpha = 1.0;
  wide.ancillas = 0;
  wide.eps_bound = 0.0;
  CHECK_THROWS_AS(uniform_sv_amplify(wide, 2.0, 0.5, 1e-9), ContractError);
}

TEST_CASE("oblivious_aa_half recovers scale-1 encodings") {
  // A = 0
  BlockEncoding zero;
  zero.block = CMatrix::Zero(2, 2);
  zero.alpha = 2.0;
  zero.ancillas = 1;
  zero.eps_bound = 0.0;
  zero.target = CMatrix::Zero(2, 2);
  BlockEncoding z = oblivious_aa_half(zero);
  CHECK(z.block.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(z.alpha == 1.0);
  CHECK(z.ancillas == 2);

  // A unitary encoded at scale 2.
  Rng rng(43);
  CMatrix w = testgen::random_unitary(rng, 4);
  BlockEncoding u;
  u.block = w / 2.0;
  u.alpha = 2.0;
  u.ancillas = 1;
  u.eps_bound = 0.0;
  u.target = w;
  BlockEncoding r = oblivious_aa_half(u);
  CHECK((r.block - w).cwiseAbs().maxCoeff() <= 1e-10);
  r.validate();

  // A = |0><1| at scale 2 -> exact projector recovery.
  CMatrix proj = CMatrix::Zero(2, 2);
  proj(0, 1) = 1.0;
  BlockEncoding p;
  p.block = proj / 2.0;
  p.alpha = 2.0;
  p.ancillas = 1;
  p.eps_bound = 0.0;
  p.target = proj;
  BlockEncoding pr = oblivious_aa_half(p);
  CHECK((pr.block - proj).cwiseAbs().maxCoeff() <= 1e-10);

  // Bad spectrum rejected.
  BlockEncoding bad;
  bad.block = 0.3 * CMatrix::Identity(2, 2);
  bad.alpha = 2.0;
  bad.ancillas = 0;
  bad.eps_bound = 0.0;
  CHECK_THROWS_AS(oblivious_aa_half(bad), ContractError);
}

TEST_CASE("oblivious_aa_half circuit-mode QSVT product") {
  Rng rng(44);
  CMatrix w = testgen::random_unitary(rng, 4);
  BlockEncoding u;
  u.block = w / 2.0;
  u.alpha = 2.0;
  u.ancillas = 1;
  u.eps_bound = 0.0;
  u.target = w;
  u.realization = unitary_dilation(u.block);
  BlockEncoding r = oblivious_aa_half(u, Mode::Circuit);
  REQUIRE(r.realization.has_value());
  CHECK(is_unitary(*r.realization, 1e-10));
  CHECK((extract_block(*r.realization, r.ancillas) - r.block).cwiseAbs().maxCoeff() <=
        1e-8);
}
