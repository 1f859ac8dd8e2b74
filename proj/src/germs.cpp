#include "indicial/germs.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace indicial {

Vec PrincipalPart::stacked() const {
  Vec v(f.size());
  for (int l = 0; l < L(); ++l) v.segment(l * f.rows(), f.rows()) = f.col(l);
  return v;
}

PrincipalPart PrincipalPart::from_stacked(cplx sigma0, const Vec& v, int n) {
  PrincipalPart g;
  g.sigma0 = sigma0;
  const int L = static_cast<int>(v.size()) / n;
  g.f.resize(n, L);
  for (int l = 0; l < L; ++l) g.f.col(l) = v.segment(l * n, n);
  return g;
}

Mat GermBasis::stacked() const {
  Mat B(n * L, dim());
  for (int k = 0; k < dim(); ++k) B.col(k) = basis[k].stacked();
  return B;
}

Mat germ_condition_matrix(const PencilSpec& p, cplx sigma0, int L) {
  const int n = p.n();
  MatrixSeries t = taylor_at(p, sigma0, std::max(L - 1, 0));
  Mat T = Mat::Zero(n * L, n * L);
  for (int r = 0; r < L; ++r)
    for (int l = r; l < L; ++l) T.block(r * n, l * n, n, n) = t.coeffs[l - r];
  return T;
}

namespace {

// (f_1..f_L) -> (f_2..f_L, 0)
Vec shift_stacked(const Vec& v, int n) {
  Vec w = Vec::Zero(v.size());
  w.head(v.size() - n) = v.tail(v.size() - n);
  return w;
}

double pencil_scale(const PencilSpec& p, cplx sigma0) {
  MatrixSeries t = taylor_at(p, sigma0, p.mu());
  return std::max(t.max_norm(), 1e-300);
}

// Columns of `basis` orthogonal to span(Q), leading `count` directions.
Mat complement_in(const Mat& basis, const Mat& Q, int count) {
  Mat R = basis;
  if (Q.cols() > 0) {
    Eigen::HouseholderQR<Mat> qr(Q);
    Mat Qo = qr.householderQ() * Mat::Identity(Q.rows(), Q.cols());
    R -= Qo * (Qo.adjoint() * R);
  }
  Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

}  // namespace

GermBasis kernel_space(const PencilSpec& p, cplx sigma0, int L_max, const Tolerances& tol,
                       int expected_dim) {
  if (L_max < 1) throw Error(ErrorCode::PreconditionViolated, "L_max must be positive");
  const int n = p.n();
  const int L = L_max;
  Mat T = germ_condition_matrix(p, sigma0, L);
  Mat N = nullspace(T, tol, pencil_scale(p, sigma0));
  const int d = static_cast<int>(N.cols());
  if (expected_dim >= 0 && d != expected_dim)
    throw Error(ErrorCode::DimensionMismatch, "germ space has dimension " + std::to_string(d) +
                                                  ", expected " + std::to_string(expected_dim));

  GermBasis g;
  g.sigma0 = sigma0;
  g.n = n;
  g.L = L;
  if (d == 0) {
    g.shift = Mat(0, 0);
    return g;
  }

  Mat ShN(n * L, d);
  for (int k = 0; k < d; ++k) ShN.col(k) = shift_stacked(N.col(k), n);
  Mat S = N.adjoint() * ShN;
  if ((ShN - N * S).norm() > 1e-7)
    throw Error(ErrorCode::InvariantMismatch, "germ space not shift invariant");

  // kernels of powers of S; S is a contraction so an absolute cutoff is used
  const double cut = 1e-7;
  std::vector<Mat> K{Mat(d, 0)};
  Mat P = Mat::Identity(d, d);
  while (K.back().cols() < d) {
    P = S * P;
    K.push_back(nullspace_abs(P, cut));
    if (static_cast<int>(K.size()) > d + 1 || K.back().cols() <= K[K.size() - 2].cols())
      throw Error(ErrorCode::InvariantMismatch, "shift is not nilpotent on the germ space");
  }
  const int lmax = static_cast<int>(K.size()) - 1;

  struct Chain {
    Vec top;  // coordinates in C^d
    int len;
  };
  std::vector<Chain> chains;
  for (int l = lmax; l >= 1; --l) {
    auto kd = [&](int j) { return j > lmax ? d : static_cast<int>(K[j].cols()); };
    int need = (kd(l) - kd(l - 1)) - (kd(l + 1) - kd(l));
    if (need < 0) throw Error(ErrorCode::InvariantMismatch, "inconsistent kernel dimensions");
    if (need == 0) continue;
    Mat Q = K[l - 1];
    for (const auto& c : chains) {
      Vec v = c.top;
      for (int k = 0; k < c.len - l; ++k) v = S * v;
      Q.conservativeResize(d, Q.cols() + 1);
      Q.col(Q.cols() - 1) = v;
    }
    Mat tops = complement_in(K[l], Q, need);
    for (int k = 0; k < need; ++k) chains.push_back({tops.col(k), l});
  }

  g.shift = Mat::Zero(d, d);
  for (const auto& c : chains) {
    const int o = static_cast<int>(g.basis.size());
    g.block_offsets.push_back(o);
    g.partial_mults.push_back(c.len);
    std::vector<Vec> chain(c.len);
    chain[c.len - 1] = N * c.top;
    for (int k = c.len - 2; k >= 0; --k) chain[k] = shift_stacked(chain[k + 1], n);
    for (int k = 0; k < c.len; ++k) {
      g.basis.push_back(PrincipalPart::from_stacked(sigma0, chain[k], n));
      if (k > 0) g.shift(o + k - 1, o + k) = 1.0;
    }
  }
  if (static_cast<int>(g.basis.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "chain basis size mismatch");
  Eigen::JacobiSVD<Mat> svd(g.stacked());
  const auto& sv = svd.singularValues();
  if (sv(d - 1) < 1e-8 * sv(0))
    throw Error(ErrorCode::InvariantMismatch, "chain basis is degenerate");
  return g;
}

PrincipalPart germ_from_log_coeffs(const LogCoefficients& u) {
  PrincipalPart g;
  g.sigma0 = u.sigma0;
  g.f.resize(u.e.rows(), u.e.cols());
  double fact = 1.0;
  cplx ipow = I;
  for (int j = 0; j < u.e.cols(); ++j) {
    if (j > 0) {
      fact *= j;
      ipow *= I;
    }
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    g.f.col(j) = (sgn * fact * ipow) * u.e.col(j);
  }
  return g;
}

LogCoefficients log_coeffs_from_germ(const PrincipalPart& f) {
  LogCoefficients u;
  u.sigma0 = f.sigma0;
  u.e.resize(f.f.rows(), f.f.cols());
  double fact = 1.0;
  cplx ipow = I;
  for (int j = 0; j < f.f.cols(); ++j) {
    if (j > 0) {
      fact *= j;
      ipow *= I;
    }
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    u.e.col(j) = f.f.col(j) / (sgn * fact * ipow);
  }
  return u;
}

bool membership(const PencilSpec& p, cplx sigma0, const LogCoefficients& u, int L_max,
                const Tolerances& tol) {
  PrincipalPart g = germ_from_log_coeffs(u);
  const int L = std::max(L_max, g.L());
  const int n = p.n();
  Vec f = Vec::Zero(n * L);
  f.head(g.f.size()) = g.stacked();
  if (f.norm() == 0.0) return true;
  Mat N = nullspace(germ_condition_matrix(p, sigma0, L), tol, pencil_scale(p, sigma0));
  Vec r = f - N * (N.adjoint() * f);
  return r.norm() <= 1e-6 * f.norm();
}

}  // namespace indicial
