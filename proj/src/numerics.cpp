#include "indicial/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace indicial {

void Tolerances::validate(int m) const {
  if (!(rank_rel > 0 && zero_eig_abs > 0 && root_cluster > 0 && line_snap > 0))
    throw Error(ErrorCode::PreconditionViolated, "tolerances must be positive");
  if (!(root_cluster < line_snap && line_snap < m / 4.0))
    throw Error(ErrorCode::PreconditionViolated, "need root_cluster < line_snap < m/4");
}

double hermitian_defect(const Mat& M) {
  if (M.size() == 0) return 0.0;
  return (M - M.adjoint()).norm();
}

Inertia inertia(const Mat& M, const Tolerances& tol) {
  Inertia r;
  if (M.rows() == 0) return r;
  if (hermitian_defect(M) > tol.rank_rel * M.norm())
    throw Error(ErrorCode::NotHermitian, "inertia of a non-Hermitian matrix");
  Mat H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double s = std::max(1.0, ev.cwiseAbs().maxCoeff());
  double cut = tol.zero_eig_abs * s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -cut)
      ++r.n_minus;
    else if (ev(i) > cut)
      ++r.n_plus;
    else
      ++r.n_zero;
  }
  return r;
}

namespace {

int rank_above(const Eigen::VectorXd& sv, double cutoff) {
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

int rank_from_singular(const Eigen::VectorXd& sv, double rel, double scale = 0.0) {
  if (sv.size() == 0) return 0;
  return rank_above(sv, rel * std::max(sv(0), scale));
}

}  // namespace

int numerical_rank(const Mat& M, const Tolerances& tol, double scale) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  return rank_from_singular(svd.singularValues(), tol.rank_rel, scale);
}

Mat nullspace(const Mat& M, const Tolerances& tol, double scale) {
  const Eigen::Index c = M.cols();
  if (M.rows() == 0) return Mat::Identity(c, c);
  if (c == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  int r = rank_from_singular(svd.singularValues(), tol.rank_rel, scale);
  return svd.matrixV().rightCols(c - r);
}

Mat nullspace_abs(const Mat& M, double cutoff) {
  const Eigen::Index c = M.cols();
  if (M.rows() == 0) return Mat::Identity(c, c);
  if (c == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  int r = rank_above(svd.singularValues(), cutoff);
  return svd.matrixV().rightCols(c - r);
}

Mat orth(const Mat& M, const Tolerances& tol) {
  if (M.cols() == 0 || M.rows() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
  int r = rank_from_singular(svd.singularValues(), tol.rank_rel);
  return svd.matrixU().leftCols(r);
}

MatrixSeries MatrixSeries::identity(int n, int order) {
  MatrixSeries s = zero(n, order);
  s.coeffs[0].setIdentity();
  return s;
}

MatrixSeries MatrixSeries::zero(int n, int order) {
  return MatrixSeries(std::vector<Mat>(order + 1, Mat::Zero(n, n)));
}

Mat MatrixSeries::eval(cplx s) const {
  Mat r = Mat::Zero(dim(), dim());
  for (int k = order(); k >= 0; --k) r = r * s + coeffs[k];
  return r;
}

double MatrixSeries::max_norm() const {
  double r = 0.0;
  for (const auto& c : coeffs) r = std::max(r, c.norm());
  return r;
}

MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.coeffs.empty() || b.coeffs.empty())
    throw Error(ErrorCode::DimensionMismatch, "empty series");
  if (a.coeffs[0].cols() != b.coeffs[0].rows())
    throw Error(ErrorCode::DimensionMismatch, "series_mul inner dimensions");
  const int N = std::min(a.order(), b.order());
  std::vector<Mat> c(N + 1, Mat::Zero(a.coeffs[0].rows(), b.coeffs[0].cols()));
  for (int k = 0; k <= N; ++k)
    for (int i = 0; i <= k; ++i) c[k] += a.coeffs[i] * b.coeffs[k - i];
  return MatrixSeries(std::move(c));
}

MatrixSeries series_inv(const MatrixSeries& a, const Tolerances& tol) {
  if (a.coeffs.empty() || a.coeffs[0].rows() != a.coeffs[0].cols())
    throw Error(ErrorCode::DimensionMismatch, "series_inv needs square coefficients");
  const int n = a.dim();
  const int N = a.order();
  if (n == 0) return a;
  Eigen::JacobiSVD<Mat> svd(a.coeffs[0]);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(n - 1) < tol.rank_rel * sv(0))
    throw Error(ErrorCode::SingularConstantTerm, "constant term not invertible");
  Eigen::PartialPivLU<Mat> lu(a.coeffs[0]);
  std::vector<Mat> b(N + 1);
  b[0] = lu.inverse();
  for (int k = 1; k <= N; ++k) {
    Mat acc = Mat::Zero(n, n);
    for (int i = 1; i <= k; ++i) acc += a.coeffs[i] * b[k - i];
    b[k] = -b[0] * acc;
  }
  return MatrixSeries(std::move(b));
}

MatrixSeries series_congruence(const MatrixSeries& a, const Mat& U, const Mat& V) {
  std::vector<Mat> c;
  c.reserve(a.coeffs.size());
  for (const auto& x : a.coeffs) c.push_back(U.adjoint() * x * V);
  return MatrixSeries(std::move(c));
}

MatrixSeries series_block(const MatrixSeries& a, int r0, int nr, int c0, int nc) {
  std::vector<Mat> c;
  c.reserve(a.coeffs.size());
  for (const auto& x : a.coeffs) c.push_back(x.block(r0, c0, nr, nc));
  return MatrixSeries(std::move(c));
}

MatrixSeries series_sub(const MatrixSeries& a, const MatrixSeries& b) {
  const int N = std::min(a.order(), b.order());
  std::vector<Mat> c(N + 1);
  for (int k = 0; k <= N; ++k) c[k] = a.coeffs[k] - b.coeffs[k];
  return MatrixSeries(std::move(c));
}

}  // namespace indicial
