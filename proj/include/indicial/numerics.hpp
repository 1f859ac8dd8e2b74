#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "indicial/error.hpp"

namespace indicial {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

struct Tolerances {
  double rank_rel = 1e-9;
  double zero_eig_abs = 1e-8;
  double root_cluster = 1e-2;
  double line_snap = 5e-2;

  // throws PreconditionViolated unless all positive and
  // root_cluster < line_snap < m/4
  void validate(int m) const;
};

struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;
  bool operator==(const Inertia&) const = default;
};

Inertia inertia(const Mat& M, const Tolerances& tol);

// Orthonormal basis of the numerical null space: singular values at or
// below rank_rel * max(sigma_max, scale) count as zero.
Mat nullspace(const Mat& M, const Tolerances& tol, double scale = 0.0);
int numerical_rank(const Mat& M, const Tolerances& tol, double scale = 0.0);

// Same with an absolute cutoff.
Mat nullspace_abs(const Mat& M, double cutoff);

// Orthonormal basis of the column span.
Mat orth(const Mat& M, const Tolerances& tol);

/// Truncated series sum_{k<=order} c_k s^k with square coefficients.
struct MatrixSeries {
  std::vector<Mat> coeffs;

  MatrixSeries() = default;
  explicit MatrixSeries(std::vector<Mat> c) : coeffs(std::move(c)) {}
  static MatrixSeries identity(int n, int order);
  static MatrixSeries zero(int n, int order);

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  int dim() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].rows()); }
  Mat eval(cplx s) const;
  double max_norm() const;
};

MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries series_inv(const MatrixSeries& a, const Tolerances& tol);

// Coefficient-wise U^* c_k V.
MatrixSeries series_congruence(const MatrixSeries& a, const Mat& U, const Mat& V);

// Sub-block rows [r0, r0+nr) x cols [c0, c0+nc) of every coefficient.
MatrixSeries series_block(const MatrixSeries& a, int r0, int nr, int c0, int nc);

MatrixSeries series_sub(const MatrixSeries& a, const MatrixSeries& b);

double hermitian_defect(const Mat& M);

}  // namespace indicial
