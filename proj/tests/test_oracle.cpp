#include "doctest.h"

#include <cmath>

#include "corpus.hpp"
#include "indicial/forms.hpp"
#include "indicial/oracle.hpp"

using namespace indicial;
using namespace indicial::oracle;

namespace {

Vec one(cplx v) { return Vec::Constant(1, v); }

QuasiPolynomial quasi(cplx sigma0, std::vector<Vec> e, CutoffSpec c = {}) {
  LogCoefficients lc{sigma0, Mat(e[0].size(), e.size())};
  for (size_t j = 0; j < e.size(); ++j) lc.e.col(j) = e[j];
  return QuasiPolynomial::from_log_coeffs(lc, c);
}

}  // namespace

TEST_CASE("cutoff ramp is smooth and matches its term expansion") {
  const cplx s0(0.3, -0.7);
  for (int k : {1, 2, 3, 5}) {
    CutoffSpec c{0.4, 0.9, k};
    CHECK(c.omega(0.3) == 1.0);
    CHECK(c.omega(0.95) == 0.0);
    PiecewiseFunction f = as_function(quasi(s0, {one(1.0)}, c));
    for (double x : {0.2, 0.45, 0.6, 0.77, 0.88, 0.95}) {
      cplx ref = c.omega(x) * std::exp(I * s0 * std::log(x));
      CHECK(std::abs(f(x)(0) - ref) < 1e-11);
    }
    CHECK(std::abs(c.omega(0.4 + 1e-7) - 1.0) < 1e-6);
    CHECK(std::abs(c.omega(0.9 - 1e-7)) < 1e-6);
  }
}

TEST_CASE("l2b_inner closed forms") {
  // f = g = 1_(0,1) x: integral of x^2 dx/x = 1/2
  PiecewiseFunction f = indicator_function({{1.0, 0, one(1.0)}}, 1.0);
  CHECK(std::abs(l2b_inner(f, f) - 0.5) < 1e-10);
  // x log x against x: -1/4
  PiecewiseFunction g = indicator_function({{1.0, 1, one(1.0)}}, 1.0);
  CHECK(std::abs(l2b_inner(g, f) + 0.25) < 1e-10);
}

TEST_CASE("l2b_inner matches term integration on random quasi-polynomials") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ExpTerm> a, b;
    for (int k = 0; k < 3; ++k) {
      a.push_back({cplx(0.3 + std::abs(U(rng)), 2 * U(rng)), k % 3, testing::random_vec(2, rng)});
      b.push_back({cplx(0.3 + std::abs(U(rng)), 2 * U(rng)), (k + 1) % 3, testing::random_vec(2, rng)});
    }
    double xe = 0.7 + 0.5 * std::abs(U(rng));
    cplx num = l2b_inner(indicator_function(a, xe), indicator_function(b, xe));
    cplx ex = l2b_inner_exact(a, b, std::log(xe));
    CHECK(std::abs(num - ex) <= 1e-8 * std::max(1.0, std::abs(ex)));
  }
}

TEST_CASE("l2b_inner rejects non-integrable data") {
  PiecewiseFunction f = indicator_function({{0.0, 0, one(1.0)}}, 1.0);
  CHECK_THROWS_AS(l2b_inner(f, f), Error);
}

TEST_CASE("operator kills eigenfunctions on the flat region") {
  PencilSpec p = testing::scalar({I, 1.0}, 2);  // sigma + i
  QuasiPolynomial u = quasi(-I, {one(1.0)});
  PiecewiseFunction Au = apply_operator(p, u);
  for (double x : {1e-4, 0.01, 0.2, 0.49}) CHECK(Au(x).norm() < 1e-12);
  CHECK(Au(0.7).norm() > 1e-3);

  PencilSpec q = testing::diag_pencil({testing::scalar({I, 1.0}, 2), testing::scalar({-1.0, 2.0 * I, 1.0}, 2)});
  QuasiPolynomial w = quasi(-I, {testing::vec({0.0, 1.0}), testing::vec({0.0, 1.0})});
  PiecewiseFunction Aw = apply_operator(q, w);
  for (double x : {1e-3, 0.3}) CHECK(Aw(x).norm() < 1e-12);
}

TEST_CASE("scaling derivative against finite differences") {
  // p(sigma) = sigma with m = 0 is x D_x / i ... applied to x log x
  PencilSpec p;
  p.m = 0;
  p.coeffs = {Mat::Zero(1, 1), Mat::Identity(1, 1)};
  QuasiPolynomial u = quasi(-I, {Vec::Zero(1), one(1.0)});
  PiecewiseFunction Au = apply_operator(p, u);
  auto f = [](double x) { return x * std::log(x); };
  for (double x : {0.05, 0.2, 0.4}) {
    double h = 1e-5;
    cplx fd = -I * x * (f(x + h) - f(x - h)) / (2 * h);
    CHECK(std::abs(Au(x)(0) - fd) < 1e-6);
  }
}

TEST_CASE("operator on the ramp against finite differences") {
  // second order: (x D_x)^2 with D_x = -i d/dx, m = 0
  PencilSpec p;
  p.m = 0;
  p.coeffs = {Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Identity(1, 1)};
  CutoffSpec c{0.4, 0.9, 3};
  const cplx s0(0.2, -0.6);
  QuasiPolynomial u = quasi(s0, {one(1.0), one(0.5)}, c);
  PiecewiseFunction f = as_function(u);
  PiecewiseFunction Au = apply_operator(p, u);
  auto g = [&](double t) { return f.at_t(t)(0); };
  for (double x : {0.5, 0.65, 0.8}) {
    const double t = std::log(x), h = 1e-4;
    cplx d2 = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
    CHECK(std::abs(Au(x)(0) + d2) < 1e-5 * std::max(1.0, std::abs(d2)));
  }
}

TEST_CASE("pairing_direct on worked examples") {
  PencilSpec lin = testing::scalar({I, 1.0}, 2);
  QuasiPolynomial u = quasi(-I, {one(1.0)});
  CHECK(std::abs(pairing_direct(lin, u, u) - 1.0) < 1e-8);

  const cplx s0 = -0.5 * I;
  PencilSpec strip = testing::scalar_from_roots({s0, star(s0, 2)}, 2);
  QuasiPolynomial a = quasi(s0, {one(1.0)});
  QuasiPolynomial b = quasi(star(s0, 2), {one(1.0)});
  CHECK(std::abs(pairing_direct(strip, a, b) - I) < 1e-8);
  CHECK(std::abs(pairing_direct(strip, b, a) + I) < 1e-8);
  CHECK(std::abs(pairing_direct(strip, a, a)) < 1e-8);
  CHECK(std::abs(pairing_direct(strip, b, b)) < 1e-8);
}

TEST_CASE("pairing_direct does not depend on the cutoff") {
  PencilSpec sq = testing::scalar({-1.0, 2.0 * I, 1.0}, 2);
  for (int j = 0; j < 2; ++j) {
    std::vector<Vec> e(j + 1, Vec::Zero(1));
    e[j] = one(1.0);
    QuasiPolynomial u1 = quasi(-I, e);
    QuasiPolynomial u2 = quasi(-I, e, CutoffSpec{0.2, 0.8, 4});
    CHECK(std::abs(pairing_direct(sq, u1, u1) - pairing_direct(sq, u2, u2)) < 1e-8);
  }
}

TEST_CASE("Mellin transform closed forms") {
  const cplx s0 = -I;
  QuasiPolynomial u = quasi(s0, {one(1.0)}, CutoffSpec{1.0, 1.0, 3});
  for (cplx s : {cplx(0.3, -0.5), cplx(-1.0, 0.2), cplx(2.0, 1.0)}) {
    cplx ref = 1.0 / (I * (s0 - s));
    CHECK(std::abs(mellin_numeric(u, s) - ref) < 1e-9 * std::abs(ref));
  }
  QuasiPolynomial ul = quasi(s0, {Vec::Zero(1), one(1.0)}, CutoffSpec{1.0, 1.0, 3});
  cplx s(0.4, -0.3);
  cplx ref = -1.0 / std::pow(I * (s0 - s), 2);
  CHECK(std::abs(mellin_numeric(ul, s) - ref) < 1e-9 * std::abs(ref));
  CHECK_THROWS_AS(mellin_numeric(u, cplx(0.0, -2.0)), Error);
}

TEST_CASE("Mellin leading coefficients follow the dictionary") {
  for (cplx s0 : {cplx(0.0, -1.0), cplx(0.7, -0.4)})
    for (int j = 0; j <= 3; ++j) {
      std::vector<Vec> e(j + 1, Vec::Zero(1));
      e[j] = one(1.0 + 0.5 * I);
      QuasiPolynomial u = quasi(s0, e);
      LogCoefficients lc{s0, Mat::Zero(1, j + 1)};
      lc.e(0, j) = 1.0 + 0.5 * I;
      cplx ref = germ_from_log_coeffs(lc).f(0, j);
      cplx got = mellin_leading_coefficient(u, s0, j + 1);
      CHECK(std::abs(got - ref) <= 1e-6 * std::abs(ref));
    }
}

TEST_CASE("Mellin principal parts follow the dictionary") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (cplx s0 : {cplx(0.0, -1.0), cplx(0.7, -0.4)})
    for (int j = 0; j <= 3; ++j) {
      LogCoefficients lc{s0, Mat::Zero(1, j + 1)};
      std::vector<Vec> e;
      for (int k = 0; k <= j; ++k) {
        lc.e(0, k) = cplx(g(rng), g(rng));
        e.push_back(one(lc.e(0, k)));
      }
      Mat ref = germ_from_log_coeffs(lc).f;
      Mat got = mellin_principal_part(quasi(s0, e), s0, j + 1);
      INFO("j = " << j << " err " << (got - ref).norm() / ref.norm());
      CHECK((got - ref).norm() <= 1e-6 * ref.norm());
    }
}
