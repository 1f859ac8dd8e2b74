#include "doctest.h"

#include "corpus.hpp"
#include "indicial/germs.hpp"
#include "indicial/roots.hpp"

using namespace indicial;
using testing::scalar;

namespace {

PencilSpec lin() { return scalar({I, 1.0}, 2); }
PencilSpec sq() { return scalar({-1.0, 2.0 * I, 1.0}, 2); }

// residual of the germ conditions for a single principal part
double condition_residual(const PencilSpec& p, const PrincipalPart& f) {
  Mat C = germ_condition_matrix(p, f.sigma0, f.L());
  return (C * f.stacked()).norm();
}

}  // namespace

TEST_CASE("kernel_space of the worked examples") {
  Tolerances tol;
  GermBasis g1 = kernel_space(lin(), -I, 3, tol);
  CHECK(g1.dim() == 1);
  CHECK(g1.partial_mults == std::vector<int>{1});

  GermBasis g2 = kernel_space(sq(), -I, 3, tol);
  CHECK(g2.dim() == 2);
  CHECK(g2.partial_mults == std::vector<int>{2});

  PencilSpec d = testing::diag_pencil({lin(), sq()});
  GermBasis g3 = kernel_space(d, -I, 4, tol);
  CHECK(g3.dim() == 3);
  CHECK(g3.partial_mults == std::vector<int>{2, 1});
}

TEST_CASE("shift is a Jordan matrix on the basis and stays in the space") {
  Tolerances tol;
  for (unsigned seed = 1; seed <= 30; ++seed) {
    auto pl = testing::planted_critical(seed);
    for (const auto& r : boundary_spectrum(pl.p, tol)) {
      GermBasis g = kernel_space(pl.p, r.sigma0, r.alg_mult + 1, tol, r.alg_mult);
      int sum = 0;
      for (int k : g.partial_mults) sum += k;
      CHECK(sum == r.alg_mult);
      for (const auto& b : g.basis) CHECK(condition_residual(pl.p, b) < 1e-8 * std::max(1.0, pl.p.max_coeff_norm()));
      // shifting coefficients maps basis[o+i] to basis[o+i-1]
      Mat B = g.stacked();
      const int n = g.n;
      Mat shifted = Mat::Zero(B.rows(), B.cols());
      shifted.topRows(B.rows() - n) = B.bottomRows(B.rows() - n);
      CHECK((shifted - B * g.shift).norm() < 1e-9 * std::max(1.0, B.norm()));
      // stable under enlarging the truncation
      GermBasis g2 = kernel_space(pl.p, r.sigma0, r.alg_mult + 3, tol);
      CHECK(g2.dim() == g.dim());
      CHECK(g2.partial_mults == g.partial_mults);
    }
  }
}

TEST_CASE("dictionary between log coefficients and principal parts") {
  Vec v = testing::vec({1.0, 2.0 * I});
  LogCoefficients u{-I, Mat::Zero(2, 1)};
  u.e.col(0) = v;
  PrincipalPart f = germ_from_log_coeffs(u);
  CHECK((f.f.col(0) - I * v).norm() < 1e-15);

  LogCoefficients w{-I, Mat::Zero(2, 2)};
  w.e.col(1) = v;
  PrincipalPart g = germ_from_log_coeffs(w);
  CHECK(g.f.col(0).norm() == 0.0);
  CHECK((g.f.col(1) - v).norm() < 1e-15);

  std::mt19937 rng(2);
  for (int k = 1; k <= 4; ++k) {
    LogCoefficients r{cplx(0.3, -0.8), testing::random_matrix(3, k, rng)};
    LogCoefficients back = log_coeffs_from_germ(germ_from_log_coeffs(r));
    CHECK((back.e - r.e).norm() < 1e-13 * r.e.norm());
    CHECK(back.sigma0 == r.sigma0);
  }
}

TEST_CASE("membership") {
  Tolerances tol;
  PencilSpec d = testing::diag_pencil({lin(), scalar({1.0}, 2)});
  LogCoefficients in{-I, Mat::Zero(2, 1)};
  in.e(0, 0) = 1.0;
  CHECK(membership(d, -I, in, 3, tol));
  LogCoefficients out{-I, Mat::Zero(2, 1)};
  out.e(1, 0) = 1.0;
  CHECK_FALSE(membership(d, -I, out, 3, tol));
  LogCoefficients chain{-I, Mat::Zero(1, 2)};
  chain.e(0, 1) = 1.0;
  CHECK(membership(sq(), -I, chain, 3, tol));
  CHECK_FALSE(membership(lin(), -I, chain, 3, tol));
}

TEST_CASE("expected dimension is enforced") {
  Tolerances tol;
  CHECK_THROWS_AS(kernel_space(sq(), -I, 3, tol, 3), Error);
}
