#include "indicial/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

namespace indicial {

bool is_critical(cplx sigma0, int m) { return std::abs(sigma0.imag() + 0.5 * m) <= 1e-9; }

cplx residue_pairing(const PencilSpec& p, const PrincipalPart& u, const PrincipalPart& v,
                     const Tolerances& tol) {
  if (std::abs(v.sigma0 - star(u.sigma0, p.m)) > tol.root_cluster)
    throw Error(ErrorCode::NotStarPaired, "residue pairing needs germs at sigma0 and sigma0*");
  const int Lu = u.L(), Lv = v.L();
  MatrixSeries t = taylor_at(p, u.sigma0, std::max(Lu + Lv - 1, 0));
  cplx acc = 0.0;
  for (int l = 1; l <= Lu; ++l)
    for (int j = 1; j <= Lv; ++j)
      acc += v.f.col(j - 1).dot(t.coeffs[l + j - 1] * u.f.col(l - 1));
  return acc;
}

cplx cross_pairing(const PencilSpec& p, const PrincipalPart& u, const PrincipalPart& v) {
  const cplx c = star(v.sigma0, p.m);
  const cplx d = u.sigma0 - c;
  if (std::abs(d) < 1e-9) {
    Tolerances t;
    t.root_cluster = 1e-9;
    return residue_pairing(p, u, v, t);
  }
  const int Lu = u.L(), Lv = v.L();
  MatrixSeries t = taylor_at(p, u.sigma0, std::max(Lu - 1, 0));
  cplx acc = 0.0;
  for (int e = -Lu; e <= -1; ++e) {
    // coefficient of s^e in p(sigma) u(sigma)
    Vec Pe = Vec::Zero(p.n());
    for (int l = 1; l <= Lu; ++l)
      if (l + e >= 0) Pe += t.coeffs[l + e] * u.f.col(l - 1);
    const int r = -1 - e;
    for (int j = 1; j <= Lv; ++j) {
      // coefficient of s^r in (s + d)^{-j}
      double b = 1.0;
      for (int i = 1; i <= r; ++i) b = b * (j + i - 1) / i;
      cplx h = ((r % 2 == 0) ? 1.0 : -1.0) * b * std::pow(d, -(j + r));
      acc += h * v.f.col(j - 1).dot(Pe);
    }
  }
  return acc;
}

Mat gram_matrix(const PencilSpec& p, const std::vector<PrincipalPart>& left,
                const std::vector<PrincipalPart>& right, const Tolerances& tol) {
  Mat G(left.size(), right.size());
  for (size_t i = 0; i < left.size(); ++i)
    for (size_t j = 0; j < right.size(); ++j) G(i, j) = residue_pairing(p, left[i], right[j], tol);
  return G;
}

CriticalRootInvariants ell_invariants_from(cplx sigma0, const Mat& H, const Mat& S,
                                           const std::vector<int>& partial_mults,
                                           const Tolerances& tol) {
  CriticalRootInvariants inv;
  inv.sigma0 = sigma0;
  const int d = static_cast<int>(S.rows());
  const int lmax = partial_mults.empty() ? 0 : *std::max_element(partial_mults.begin(), partial_mults.end());
  std::vector<int> kdim(lmax + 2, 0);
  std::vector<Mat> ker(lmax + 2);
  Mat P = Mat::Identity(d, d);
  ker[0] = Mat(d, 0);
  for (int l = 1; l <= lmax + 1; ++l) {
    P = S * P;
    ker[l] = nullspace_abs(P, 1e-7);
    kdim[l] = static_cast<int>(ker[l].cols());
  }
  Mat Sp = Mat::Identity(d, d);  // S^{l-1}
  for (int l = 1; l <= lmax; ++l) {
    const Mat& Z = ker[l];
    Mat F = Z.adjoint() * H * Sp * Z;
    F = (0.5 * (F + F.adjoint())).eval();
    Inertia in = inertia(F, tol);
    EllCounts c{l, in.n_zero, in.n_plus, in.n_minus};
    const int expect_m0 = kdim[l + 1] - kdim[l] + kdim[l - 1];
    const int nblocks = static_cast<int>(std::count(partial_mults.begin(), partial_mults.end(), l));
    if (c.m0 != expect_m0 || c.m_plus + c.m_minus != nblocks)
      throw Error(ErrorCode::InvariantMismatch,
                  "ell-form counts disagree with the kernel dimensions at ell = " + std::to_string(l));
    if (l % 2 == 1) inv.signature_contribution += c.m_plus - c.m_minus;
    inv.per_ell.push_back(c);
    Sp = S * Sp;
  }
  return inv;
}

CriticalRootInvariants ell_invariants(const PencilSpec& p, cplx sigma0, const GermBasis& germ,
                                      const Tolerances& tol) {
  if (!is_critical(sigma0, p.m)) throw Error(ErrorCode::NotCritical, "root is off the critical line");
  Mat G = gram_matrix(p, germ.basis, germ.basis, tol);
  if (hermitian_defect(G) > 1e-9 * std::max(G.norm(), 1.0))
    throw Error(ErrorCode::InvariantMismatch, "Gram matrix at a critical root is not Hermitian");
  Mat H = G.transpose();
  return ell_invariants_from(sigma0, H, germ.shift, germ.partial_mults, tol);
}

namespace {

void reduce(const MatrixSeries& q, int acc, double thr, const Tolerances& tol,
            std::map<int, NormalFormBlock>& out) {
  const int r = q.dim();
  if (r == 0) return;
  int nu = 0;
  while (nu <= q.order() && q.coeffs[nu].norm() <= thr) ++nu;
  if (nu > q.order())
    throw Error(ErrorCode::TruncationExhausted, "series vanishes to the truncation order");
  MatrixSeries qt(std::vector<Mat>(q.coeffs.begin() + nu, q.coeffs.end()));
  const int ell = acc + nu;

  Mat q0 = 0.5 * (qt.coeffs[0] + qt.coeffs[0].adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(q0);
  const auto& lam = es.eigenvalues();
  std::vector<int> zero, nonzero;
  for (int i = 0; i < r; ++i) (std::abs(lam(i)) <= thr ? zero : nonzero).push_back(i);

  auto emit = [&](int plus, int minus) {
    if (ell == 0 || plus + minus == 0) return;
    auto& b = out[ell];
    b.ell = ell;
    b.n_plus += plus;
    b.n_minus += minus;
  };
  int plus = 0, minus = 0;
  for (int i : nonzero) (lam(i) > 0 ? plus : minus)++;
  emit(plus, minus);
  if (zero.empty()) return;

  const int k = static_cast<int>(zero.size());
  Mat V(r, r);
  int c = 0;
  for (int i : zero) V.col(c++) = es.eigenvectors().col(i);
  for (int i : nonzero) V.col(c++) = es.eigenvectors().col(i);
  MatrixSeries qv = series_congruence(qt, V, V);
  MatrixSeries q11 = series_block(qv, 0, k, 0, k);
  if (k == r) {
    reduce(q11, ell, thr, tol, out);
    return;
  }
  MatrixSeries q12 = series_block(qv, 0, k, k, r - k);
  MatrixSeries q21 = series_block(qv, k, r - k, 0, k);
  MatrixSeries q22 = series_block(qv, k, r - k, k, r - k);
  MatrixSeries schur = series_sub(q11, series_mul(series_mul(q12, series_inv(q22, tol)), q21));
  for (auto& m : schur.coeffs) m = (0.5 * (m + m.adjoint())).eval();
  reduce(schur, ell, thr, tol, out);
}

}  // namespace

NormalFormBlocks normal_form(const PencilSpec& p, cplx sigma0, int alg_mult, const Tolerances& tol) {
  if (!is_critical(sigma0, p.m)) throw Error(ErrorCode::NotCritical, "root is off the critical line");
  int N = alg_mult + p.mu();
  for (int attempt = 0; attempt < 2; ++attempt, N *= 2) {
    MatrixSeries q = taylor_at(p, sigma0, N);
    for (auto& m : q.coeffs) m = (0.5 * (m + m.adjoint())).eval();
    const double thr = tol.zero_eig_abs * std::max(1.0, q.max_norm());
    std::map<int, NormalFormBlock> out;
    try {
      reduce(q, 0, thr, tol, out);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TruncationExhausted && attempt == 0) continue;
      throw;
    }
    NormalFormBlocks blocks;
    int total = 0;
    for (auto& [ell, b] : out) {
      blocks.push_back(b);
      total += ell * (b.n_plus + b.n_minus);
    }
    if (total != alg_mult)
      throw Error(ErrorCode::InvariantMismatch,
                  "normal form accounts for " + std::to_string(total) + " of multiplicity " +
                      std::to_string(alg_mult));
    return blocks;
  }
  throw Error(ErrorCode::TruncationExhausted, "normal form truncation exhausted");
}

NormalFormBlocks blocks_of(const CriticalRootInvariants& inv) {
  NormalFormBlocks b;
  for (const auto& c : inv.per_ell)
    if (c.m_plus + c.m_minus > 0) b.push_back({c.ell, c.m_plus, c.m_minus});
  return b;
}

int total_signature(const std::vector<CriticalRootInvariants>& per_root) {
  int s = 0;
  for (const auto& r : per_root) s += r.signature_contribution;
  return s;
}

}  // namespace indicial
