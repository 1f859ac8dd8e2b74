#include "indicial/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "indicial/spectral_flow.hpp"

namespace indicial {

namespace {

Mat orth_cols(const Mat& A, double rel = 1e-10) {
  if (A.cols() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * std::max(s(0), 1e-300)) ++r;
  if (s(0) == 0.0) r = 0;
  return svd.matrixU().leftCols(r);
}

Mat hcat(const Mat& a, const Mat& b) {
  Mat c(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  if (a.cols()) c.leftCols(a.cols()) = a;
  if (b.cols()) c.rightCols(b.cols()) = b;
  return c;
}

Mat block_form(const QuotientModel& Q, int b) {
  const auto& rb = Q.blocks[b];
  return Q.form.block(rb.offset, rb.offset, rb.germ.dim(), rb.germ.dim());
}

Mat embed(const QuotientModel& Q, int b, const Mat& local) {
  Mat out = Mat::Zero(Q.dim(), local.cols());
  out.block(Q.blocks[b].offset, 0, local.rows(), local.cols()) = local;
  return out;
}

void require_lagrangian_invariant(const QuotientModel& Q, const ExtensionSubspace& D, const char* what) {
  if (!is_selfadjoint(Q, D) || !is_invariant(Q, D))
    throw Error(ErrorCode::InvariantMismatch, std::string(what) + " failed the Lagrangian/invariance check");
}

}  // namespace

bool subspace_contains(const Mat& big, const Mat& small) {
  Mat S = orth_cols(small);
  if (S.cols() == 0) return true;
  Mat B = orth_cols(big);
  if (B.cols() == 0) return false;
  Mat R = S - B * (B.adjoint() * S);
  Eigen::JacobiSVD<Mat> svd(R);
  return svd.singularValues()(0) <= angle_tol;
}

bool subspace_equal(const Mat& a, const Mat& b) {
  return orth_cols(a).cols() == orth_cols(b).cols() && subspace_contains(a, b) && subspace_contains(b, a);
}

Mat subspace_intersection(const Mat& a, const Mat& b) {
  Mat A = orth_cols(a), B = orth_cols(b);
  if (A.cols() == 0 || B.cols() == 0) return Mat(a.rows(), 0);
  Mat M = hcat(A, -B);
  Mat N = nullspace_abs(M, angle_tol);
  return orth_cols(A * N.topRows(A.cols()));
}

Mat subspace_sum(const Mat& a, const Mat& b) { return orth_cols(hcat(a, b), 1e-8); }

QuotientModel build_quotient(const PencilSpec& p, const Tolerances& tol, std::optional<double> window) {
  if (!check_symmetry(p, tol)) throw Error(ErrorCode::NotSymmetric, "p(sigma*)^* != p(sigma)");
  QuotientModel Q;
  Q.p = p;
  Q.tol = tol;
  Q.window = window ? *window : default_window(p);
  Q.all_roots = boundary_spectrum(p, tol, Q.window);

  std::vector<int> block_of(Q.all_roots.size(), -1);
  int offset = 0;
  for (size_t i = 0; i < Q.all_roots.size(); ++i) {
    const Root& r = Q.all_roots[i];
    if (r.band == Band::UpperEdge || r.band == Band::LowerEdge) {
      Q.warnings.push_back("root on the boundary line Im = " + std::to_string(r.sigma0.imag()) +
                           " excluded from the quotient");
      continue;
    }
    if (!in_open_strip(r.band)) continue;
    RootBlock b;
    b.root = r;
    b.germ = kernel_space(p, r.sigma0, r.alg_mult, tol, r.alg_mult);
    b.offset = offset;
    offset += b.germ.dim();
    block_of[i] = static_cast<int>(Q.blocks.size());
    Q.blocks.push_back(std::move(b));
  }
  for (size_t i = 0; i < Q.all_roots.size(); ++i) {
    if (block_of[i] < 0) continue;
    const int pr = Q.all_roots[i].star_partner;
    if (pr < 0 || block_of[pr] < 0) throw Error(ErrorCode::InvariantMismatch, "strip root without star partner");
    Q.blocks[block_of[i]].partner = block_of[pr];
  }

  const int d = offset;
  Q.generator = Mat::Zero(d, d);
  Q.gram = Mat::Zero(d, d);
  for (size_t a = 0; a < Q.blocks.size(); ++a) {
    const auto& A = Q.blocks[a];
    const int da = A.germ.dim();
    Q.generator.block(A.offset, A.offset, da, da) = A.root.sigma0 * Mat::Identity(da, da) + A.germ.shift;
    for (size_t b = 0; b < Q.blocks.size(); ++b) {
      const auto& B = Q.blocks[b];
      const int db = B.germ.dim();
      if (static_cast<int>(b) == A.partner) {
        Q.gram.block(A.offset, B.offset, da, db) = gram_matrix(p, A.germ.basis, B.germ.basis, tol);
      } else {
        for (int i = 0; i < da; ++i)
          for (int j = 0; j < db; ++j)
            Q.cross_block_max = std::max(Q.cross_block_max,
                                         std::abs(cross_pairing(p, A.germ.basis[i], B.germ.basis[j])));
      }
    }
  }
  const double gn = std::max(Q.gram.norm(), 1e-300);
  if (d > 0 && hermitian_defect(Q.gram) > 1e-9 * gn)
    throw Error(ErrorCode::InvariantMismatch, "quotient Gram matrix is not Hermitian");
  Q.gram = (0.5 * (Q.gram + Q.gram.adjoint())).eval();
  Q.form = Q.gram.transpose();
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Q.form, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double smallest = ev.cwiseAbs().minCoeff();
    if (smallest <= tol.zero_eig_abs * std::max(1.0, ev.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::GramDegenerate, "quotient Gram form is degenerate");
    if (selfadjoint_defect(Q) > 1e-9)
      throw Error(ErrorCode::InvariantMismatch, "generator is not Gram-selfadjoint after the shift by im/2");
  }
  return Q;
}

double selfadjoint_defect(const QuotientModel& Q) {
  if (Q.dim() == 0) return 0.0;
  Mat h = Q.generator + (I * (0.5 * Q.m())) * Mat::Identity(Q.dim(), Q.dim());
  double denom = std::max(Q.form.norm() * h.norm(), 1e-300);
  return (Q.form * h - h.adjoint() * Q.form).norm() / denom;
}

ExtensionSubspace adjoint_subspace(const QuotientModel& Q, const ExtensionSubspace& D) {
  const int d = Q.dim();
  Mat Dc = orth_cols(D.basis);
  if (Dc.cols() == 0) return {Mat::Identity(d, d)};
  Mat M = Dc.adjoint() * Q.form;
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const int r = static_cast<int>(Dc.cols());
  return {svd.matrixV().rightCols(d - r)};
}

bool is_selfadjoint(const QuotientModel& Q, const ExtensionSubspace& D) {
  return subspace_equal(D.basis, adjoint_subspace(Q, D).basis) &&
         (Q.dim() == 0 || orth_cols(D.basis).cols() * 2 == Q.dim());
}

bool is_invariant(const QuotientModel& Q, const ExtensionSubspace& D) {
  if (D.basis.cols() == 0) return true;
  return subspace_contains(D.basis, Q.generator * D.basis);
}

Inertia deficiency_indices(const QuotientModel& Q) { return inertia(Q.form, Q.tol); }

ExtensionSubspace root_space(const QuotientModel& Q, int b) {
  return {embed(Q, b, Mat::Identity(Q.blocks[b].germ.dim(), Q.blocks[b].germ.dim()))};
}

namespace {

ExtensionSubspace band_space(const QuotientModel& Q, Band band) {
  Mat out(Q.dim(), 0);
  for (size_t b = 0; b < Q.blocks.size(); ++b)
    if (Q.blocks[b].root.band == band) out = hcat(out, root_space(Q, static_cast<int>(b)).basis);
  return {out};
}

// power series sqrt(eps / C(x)) mod x^len, C(0) != 0 and eps = sign C(0)
std::vector<double> normalizer(const std::vector<double>& C, double eps) {
  const int len = static_cast<int>(C.size());
  std::vector<double> w(len, 0.0);  // eps / C
  w[0] = eps / C[0];
  for (int k = 1; k < len; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += C[i] * w[k - i];
    w[k] = -acc / C[0];
  }
  std::vector<double> q(len, 0.0);
  q[0] = std::sqrt(w[0]);
  for (int k = 1; k < len; ++k) {
    double acc = 0.0;
    for (int i = 1; i < k; ++i) acc += q[i] * q[k - i];
    q[k] = (w[k] - acc) / (2.0 * q[0]);
  }
  return q;
}

}  // namespace

ExtensionSubspace lower_space(const QuotientModel& Q) { return band_space(Q, Band::StripLower); }
ExtensionSubspace upper_space(const QuotientModel& Q) { return band_space(Q, Band::StripUpper); }

std::vector<CanonicalBlock> canonical_chain_basis(const QuotientModel& Q, int block,
                                                  std::optional<unsigned> seed) {
  const auto& rb = Q.blocks.at(block);
  if (rb.root.band != Band::Critical) throw Error(ErrorCode::NotCritical, "canonical basis needs a critical root");
  const int d = rb.germ.dim();
  const Mat H = block_form(Q, block);
  const Mat& S = rb.germ.shift;
  const double hs = std::max(1.0, H.norm());
  std::mt19937_64 rng(seed.value_or(0));
  std::normal_distribution<double> gauss;

  Mat Z = Mat::Identity(d, d);
  if (seed) {
    Mat R(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) R(i, j) = cplx(gauss(rng), gauss(rng));
    Z = Eigen::HouseholderQR<Mat>(R).householderQ();
  }
  std::vector<CanonicalBlock> out;
  while (Z.cols() > 0) {
    const int k = static_cast<int>(Z.cols());
    int ell = 0;
    Mat SZ = Z;
    while (SZ.norm() > 1e-7 && ell <= d) {
      SZ = S * SZ;
      ++ell;
    }
    if (ell == 0 || ell > k) throw Error(ErrorCode::CanonicalFormFailure, "bad chain length");
    Mat Sl1 = Mat::Identity(d, d);
    for (int i = 0; i + 1 < ell; ++i) Sl1 = S * Sl1;
    Mat F = Z.adjoint() * H * Sl1 * Z;
    F = (0.5 * (F + F.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(F);
    const auto& lam = es.eigenvalues();
    Eigen::Index imax;
    lam.cwiseAbs().maxCoeff(&imax);
    Vec y = es.eigenvectors().col(imax);
    if (seed) {
      y.setZero();
      for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) * lam(imax) > 0 && std::abs(lam(i)) >= 0.5 * std::abs(lam(imax)))
          y += cplx(gauss(rng), gauss(rng)) * es.eigenvectors().col(i);
    }
    Vec t = Z * y;
    std::vector<double> c(ell);
    Vec Sjt = t;
    for (int j = 0; j < ell; ++j) {
      c[j] = (t.adjoint() * H * Sjt)(0, 0).real();
      Sjt = S * Sjt;
    }
    if (std::abs(c[ell - 1]) <= Q.tol.zero_eig_abs * hs)
      throw Error(ErrorCode::CanonicalFormFailure, "chain top has vanishing ell-form value");
    const double eps = c[ell - 1] > 0 ? 1.0 : -1.0;
    std::vector<double> C(ell);
    for (int i = 0; i < ell; ++i) C[i] = c[ell - 1 - i];
    std::vector<double> q = normalizer(C, eps);
    Vec tn = Vec::Zero(d);
    Vec Skt = t;
    for (int i = 0; i < ell; ++i) {
      tn += q[i] * Skt;
      Skt = S * Skt;
    }
    Mat W(d, ell);
    W.col(ell - 1) = tn;
    for (int i = ell - 2; i >= 0; --i) W.col(i) = S * W.col(i + 1);
    out.push_back({ell, static_cast<int>(eps), W});

    Mat G = W.adjoint() * H * W;
    Mat Zn = Z - W * G.partialPivLu().solve(W.adjoint() * H * Z);
    Eigen::JacobiSVD<Mat> svd(Zn, Eigen::ComputeThinU);
    Z = svd.matrixU().leftCols(k - ell);
  }

  std::sort(out.begin(), out.end(), [](const CanonicalBlock& a, const CanonicalBlock& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.sign > b.sign;
  });
  // verify: orthogonal blocks, each with +-SIP Gram and Jordan action
  Mat all(d, 0);
  for (const auto& b : out) all = hcat(all, b.chain);
  if (all.cols() != d || orth_cols(all).cols() != d)
    throw Error(ErrorCode::CanonicalFormFailure, "chains do not span the root space");
  Mat G = all.adjoint() * H * all;
  Mat target = Mat::Zero(d, d);
  int o = 0;
  for (const auto& b : out) {
    for (int i = 0; i < b.size; ++i) target(o + i, o + b.size - 1 - i) = static_cast<double>(b.sign);
    if ((S * b.chain.rightCols(b.size - 1) - b.chain.leftCols(b.size - 1)).norm() > 1e-8 ||
        (S * b.chain.col(0)).norm() > 1e-8)
      throw Error(ErrorCode::CanonicalFormFailure, "chain is not a Jordan chain");
    o += b.size;
  }
  if ((G - target).cwiseAbs().maxCoeff() > 1e-8)
    throw Error(ErrorCode::CanonicalFormFailure, "chain Gram is not a signed reversal matrix");
  for (auto& b : out) b.chain = embed(Q, block, b.chain);
  return out;
}

std::vector<CriticalRootInvariants> critical_invariants(const QuotientModel& Q) {
  std::vector<CriticalRootInvariants> out;
  for (size_t b = 0; b < Q.blocks.size(); ++b) {
    const auto& rb = Q.blocks[b];
    if (rb.root.band != Band::Critical) continue;
    CriticalRootInvariants inv = ell_invariants_from(rb.root.sigma0, block_form(Q, static_cast<int>(b)),
                                                     rb.germ.shift, rb.germ.partial_mults, Q.tol);
    NormalFormBlocks nf = normal_form(Q.p, rb.root.sigma0, rb.root.alg_mult, Q.tol);
    if (nf != blocks_of(inv))
      throw Error(ErrorCode::InvariantMismatch, "normal form disagrees with the ell-form invariants");
    out.push_back(inv);
  }
  return out;
}

bool sign_condition(const QuotientModel& Q) {
  for (const auto& inv : critical_invariants(Q))
    for (const auto& c : inv.per_ell) {
      if (c.ell % 2 == 1 && (c.m_plus || c.m_minus)) return false;
      if (c.ell % 2 == 0 && c.m_plus && c.m_minus) return false;
    }
  return true;
}

ExtensionSubspace critical_halves(const QuotientModel& Q) {
  Mat out(Q.dim(), 0);
  for (size_t b = 0; b < Q.blocks.size(); ++b) {
    if (Q.blocks[b].root.band != Band::Critical) continue;
    for (const auto& cb : canonical_chain_basis(Q, static_cast<int>(b)))
      out = hcat(out, cb.chain.leftCols(cb.size / 2));
  }
  return {out};
}

ExtensionSubspace friedrichs_subspace(const QuotientModel& Q, int samples) {
  if (!semibounded_check(Q.p, Q.tol, samples, Q.window))
    throw Error(ErrorCode::NotSemibounded, "p is not semibounded on the critical line");
  if (!sign_condition(Q)) throw Error(ErrorCode::SignConditionViolated, "sign condition fails");
  ExtensionSubspace F{hcat(lower_space(Q).basis, critical_halves(Q).basis)};
  require_lagrangian_invariant(Q, F, "Friedrichs subspace");
  return F;
}

ExtensionSubspace krein_subspace(const QuotientModel& Q, int samples) {
  if (!semibounded_check(Q.p, Q.tol, samples, Q.window))
    throw Error(ErrorCode::NotSemibounded, "p is not semibounded on the critical line");
  if (!sign_condition(Q)) throw Error(ErrorCode::SignConditionViolated, "sign condition fails");
  ExtensionSubspace halves = critical_halves(Q);
  ExtensionSubspace K{hcat(upper_space(Q).basis, halves.basis)};
  require_lagrangian_invariant(Q, K, "Krein subspace");
  Mat F = hcat(lower_space(Q).basis, halves.basis);
  // F + K misses only the upper halves of the critical chains
  Mat expected_sum = hcat(hcat(lower_space(Q).basis, upper_space(Q).basis), halves.basis);
  if (!subspace_equal(subspace_intersection(F, K.basis), halves.basis) ||
      !subspace_equal(subspace_sum(F, K.basis), expected_sum))
    throw Error(ErrorCode::InvariantMismatch, "Friedrichs/Krein lattice relations fail");
  return K;
}

ExtensionSubspace construct_invariant_selfadjoint(const QuotientModel& Q) {
  Mat out = lower_space(Q).basis;
  for (size_t b = 0; b < Q.blocks.size(); ++b) {
    if (Q.blocks[b].root.band != Band::Critical) continue;
    std::vector<CanonicalBlock> cbs = canonical_chain_basis(Q, static_cast<int>(b));
    std::vector<const CanonicalBlock*> pos, neg;
    for (const auto& cb : cbs) {
      out = hcat(out, cb.chain.leftCols(cb.size / 2));
      if (cb.size % 2 == 1) (cb.sign > 0 ? pos : neg).push_back(&cb);
    }
    if (pos.size() != neg.size())
      throw Error(ErrorCode::NoInvariantSelfadjointExtension,
                  "odd blocks at a critical root have nonzero signature");
    for (size_t i = 0; i < pos.size(); ++i) {
      Vec v = pos[i]->chain.col(pos[i]->size / 2) + neg[i]->chain.col(neg[i]->size / 2);
      out = hcat(out, v);
    }
  }
  ExtensionSubspace D{out};
  require_lagrangian_invariant(Q, D, "invariant selfadjoint extension");
  return D;
}

ExtensionSubspace invariant_extension_from(const QuotientModel& Q, const ExtensionSubspace& U) {
  if (!sign_condition(Q)) throw Error(ErrorCode::SignConditionViolated, "sign condition fails");
  Mat lower = lower_space(Q).basis;
  if (!subspace_contains(lower, U.basis) || !is_invariant(Q, U))
    throw Error(ErrorCode::PreconditionViolated, "U must be an invariant subspace below the critical line");
  Mat perp = adjoint_subspace(Q, U).basis;
  Mat upper_part = subspace_intersection(upper_space(Q).basis, perp);
  ExtensionSubspace D{hcat(hcat(orth_cols(U.basis), upper_part), critical_halves(Q).basis)};
  require_lagrangian_invariant(Q, D, "invariant extension");
  return D;
}

bool order_leq(const QuotientModel& Q, const ExtensionSubspace& D1, const ExtensionSubspace& D2, int samples) {
  if (!sign_condition(Q) || !semibounded_check(Q.p, Q.tol, samples, Q.window))
    throw Error(ErrorCode::PreconditionViolated, "order relation needs the sign condition and semiboundedness");
  for (const auto* D : {&D1, &D2})
    if (!is_selfadjoint(Q, *D) || !is_invariant(Q, *D))
      throw Error(ErrorCode::PreconditionViolated, "order relation needs invariant selfadjoint extensions");
  Mat lower = lower_space(Q).basis;
  return subspace_contains(subspace_intersection(D2.basis, lower), subspace_intersection(D1.basis, lower));
}

bool semibounded_check(const PencilSpec& p, const Tolerances& tol, int samples, std::optional<double> window) {
  const double T = window ? *window : default_window(p);
  const cplx shift(0.0, -0.5 * p.m);
  samples = std::max(samples, 2);
  for (int i = 0; i < samples; ++i) {
    double x = -T + 2.0 * T * i / (samples - 1);
    Mat M = evaluate(p, x + shift);
    M = (0.5 * (M + M.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev(0) < -tol.zero_eig_abs * std::max(1.0, ev.cwiseAbs().maxCoeff())) return false;
  }
  for (const auto& r : boundary_spectrum(p, tol, T)) {
    if (r.band != Band::Critical) continue;
    for (const auto& b : normal_form(p, r.sigma0, r.alg_mult, tol))
      if (b.ell % 2 == 1 || b.n_minus > 0) return false;
  }
  return true;
}

}  // namespace indicial
