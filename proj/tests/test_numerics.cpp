#include "doctest.h"

#include "corpus.hpp"
#include "indicial/numerics.hpp"

using namespace indicial;

namespace {

Mat mat2(cplx a, cplx b, cplx c, cplx d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}

MatrixSeries random_series(int n, int order, std::mt19937& rng, double scale = 1.0) {
  MatrixSeries s = MatrixSeries::zero(n, order);
  for (auto& c : s.coeffs) c = scale * testing::random_matrix(n, n, rng);
  return s;
}

}  // namespace

TEST_CASE("inertia examples") {
  Tolerances tol;
  CHECK(inertia(mat2(0, 1, 1, 0), tol) == Inertia{1, 0, 1});
  CHECK(inertia(Mat::Zero(3, 3), tol) == Inertia{0, 3, 0});
  Tolerances t2;
  t2.zero_eig_abs = 1e-10;
  Mat D = Mat::Zero(3, 3);
  D.diagonal() << 2.0, -5.0, 1e-14;
  CHECK(inertia(D, t2) == Inertia{1, 1, 1});
  CHECK_THROWS_AS(inertia(mat2(0, 1, 0, 0), tol), Error);
}

TEST_CASE("inertia is invariant under unitary congruence") {
  std::mt19937 rng(3);
  Tolerances tol;
  for (int trial = 0; trial < 20; ++trial) {
    Mat D = Mat::Zero(5, 5);
    D.diagonal() << 3.0, -1.0, 0.0, 0.5, -2.0;
    Mat U = testing::random_unitary(5, rng);
    CHECK(inertia(U.adjoint() * D * U, tol) == Inertia{2, 1, 2});
  }
}

TEST_CASE("nullspace examples") {
  Tolerances tol;
  CHECK(nullspace(Mat::Identity(3, 3), tol).cols() == 0);
  Mat N = nullspace(mat2(1, 1, 1, 1), tol);
  REQUIRE(N.cols() == 1);
  CHECK(std::abs(std::abs(N(0, 0)) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(N(0, 0) + N(1, 0)) < 1e-12);
  CHECK(nullspace(Mat::Zero(2, 2), tol).cols() == 2);
}

TEST_CASE("nullspace dimension plus rank is the column count") {
  std::mt19937 rng(5);
  Tolerances tol;
  for (int r = 0; r <= 4; ++r) {
    Mat M = testing::random_matrix(6, r, rng) * testing::random_matrix(r, 4, rng);
    Mat N = nullspace(M, tol);
    CHECK(N.cols() + numerical_rank(M, tol) == 4);
    CHECK(N.cols() == 4 - r);
    if (N.cols()) {
      CHECK((N.adjoint() * N - Mat::Identity(N.cols(), N.cols())).norm() < 1e-12);
      CHECK((M * N).norm() <= tol.rank_rel * M.norm() * 2.0 + 1e-14);
    }
  }
}

TEST_CASE("series_mul") {
  std::mt19937 rng(11);
  MatrixSeries b = random_series(2, 3, rng);
  MatrixSeries c = series_mul(MatrixSeries::identity(2, 3), b);
  for (int k = 0; k <= 3; ++k) CHECK((c.coeffs[k] - b.coeffs[k]).norm() == 0.0);

  MatrixSeries s = MatrixSeries::zero(2, 3);
  s.coeffs[1] = Mat::Identity(2, 2);
  MatrixSeries s2 = series_mul(s, s);
  CHECK(s2.coeffs[2].isApprox(Mat::Identity(2, 2)));
  CHECK(s2.coeffs[0].norm() + s2.coeffs[1].norm() + s2.coeffs[3].norm() == 0.0);

  MatrixSeries x = random_series(2, 2, rng), y = random_series(2, 2, rng);
  MatrixSeries xy = series_mul(x, y);
  CHECK((xy.coeffs[2] - (x.coeffs[0] * y.coeffs[2] + x.coeffs[1] * y.coeffs[1] + x.coeffs[2] * y.coeffs[0])).norm() <
        1e-13);
  CHECK_THROWS_AS(series_mul(x, random_series(3, 2, rng)), Error);
}

TEST_CASE("series_inv") {
  std::mt19937 rng(13);
  Tolerances tol;
  Mat N = Mat::Zero(3, 3);
  N(0, 1) = 1.0;
  N(1, 2) = 2.0;
  MatrixSeries a = MatrixSeries::identity(3, 3);
  a.coeffs[1] = N;
  MatrixSeries ai = series_inv(a, tol);
  CHECK((ai.coeffs[1] + N).norm() < 1e-14);
  CHECK((ai.coeffs[2] - N * N).norm() < 1e-14);
  CHECK(ai.coeffs[3].norm() < 1e-14);

  MatrixSeries c0 = MatrixSeries::zero(2, 0);
  c0.coeffs[0] = mat2(2, 1, 0, 1);
  CHECK((series_inv(c0, tol).coeffs[0] - c0.coeffs[0].inverse()).norm() < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    MatrixSeries r = random_series(3, 3, rng, 0.3);
    r.coeffs[0] += 2.0 * Mat::Identity(3, 3);
    MatrixSeries p = series_mul(r, series_inv(r, tol));
    CHECK((p.coeffs[0] - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    for (int k = 1; k <= 3; ++k) CHECK(p.coeffs[k].cwiseAbs().maxCoeff() < 1e-10);
    MatrixSeries rr = series_inv(series_inv(r, tol), tol);
    for (int k = 0; k <= 3; ++k) CHECK((rr.coeffs[k] - r.coeffs[k]).cwiseAbs().maxCoeff() < 1e-9);
  }
  MatrixSeries sing = MatrixSeries::zero(2, 1);
  sing.coeffs[0] = mat2(1, 1, 1, 1);
  CHECK_THROWS_AS(series_inv(sing, tol), Error);
}

TEST_CASE("tolerance validation") {
  Tolerances tol;
  CHECK_NOTHROW(tol.validate(2));
  tol.line_snap = 0.6;
  CHECK_THROWS_AS(tol.validate(2), Error);
}
