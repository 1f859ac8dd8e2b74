#include "indicial/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace indicial {

const char* band_name(Band b) {
  switch (b) {
    case Band::Above: return "above";
    case Band::UpperEdge: return "upper_edge";
    case Band::StripUpper: return "strip_upper";
    case Band::Critical: return "critical";
    case Band::StripLower: return "strip_lower";
    case Band::LowerEdge: return "lower_edge";
    case Band::Below: return "below";
  }
  return "?";
}

double default_window(const PencilSpec& p) {
  Eigen::JacobiSVD<Mat> svd(p.coeffs.back());
  double smin = svd.singularValues()(p.n() - 1);
  double amax = p.max_coeff_norm();
  if (smin <= 1e-9 * svd.singularValues()(0)) return max_default_window;
  return std::min(10.0 * (1.0 + amax / smin), max_default_window);
}

namespace {

double sigma_min_ratio(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Band classify(double im, int m, double snap) {
  const double mm = static_cast<double>(m);
  if (std::abs(im) <= snap) return Band::UpperEdge;
  if (std::abs(im + mm / 2) <= snap) return Band::Critical;
  if (std::abs(im + mm) <= snap) return Band::LowerEdge;
  if (im > 0) return Band::Above;
  if (im > -mm / 2) return Band::StripUpper;
  if (im > -mm) return Band::StripLower;
  return Band::Below;
}

double snapped_im(Band b, double im, int m) {
  switch (b) {
    case Band::UpperEdge: return 0.0;
    case Band::Critical: return -0.5 * m;
    case Band::LowerEdge: return -static_cast<double>(m);
    default: return im;
  }
}

// Two points where p is comfortably invertible; roots are computed as
// sigma = c + 1/tau from the reversed polynomial about c.
std::pair<cplx, cplx> expansion_points(const PencilSpec& p) {
  std::vector<std::pair<double, cplx>> cand;
  const double mid = -0.5 * p.m;
  for (int k = 0; k < 24; ++k) {
    cplx c(0.37 * k - 4.1 + 0.013 * k * k, mid + 0.83 * std::sin(1.7 * k + 0.3));
    cand.push_back({sigma_min_ratio(evaluate(p, c)), c});
  }
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  if (cand[0].first < 1e-13)
    throw Error(ErrorCode::PreconditionViolated, "det p vanishes identically (singular pencil)");
  return {cand[0].second, cand[1].second};
}

// Eigenvalue clusters (center, size) of the companion matrix about c.
std::vector<std::pair<cplx, int>> root_clusters(const PencilSpec& p, cplx c, double T, const Tolerances& tol) {
  const int n = p.n();
  const int mu = p.mu();
  MatrixSeries t = taylor_at(p, c, mu);
  Eigen::PartialPivLU<Mat> lu(t.coeffs[0]);
  const int N = n * mu;
  Mat C = Mat::Zero(N, N);
  for (int b = 0; b + 1 < mu; ++b) C.block(b * n, (b + 1) * n, n, n).setIdentity();
  for (int i = 0; i < mu; ++i) C.block((mu - 1) * n, i * n, n, n) = -lu.solve(t.coeffs[mu - i]);
  Eigen::ComplexEigenSolver<Mat> es(C, false);
  const Vec& tau = es.eigenvalues();

  const double reach = 2.0 * std::hypot(T + std::abs(c.real()), p.m + 2.0);
  std::vector<cplx> taus;
  for (Eigen::Index k = 0; k < tau.size(); ++k)
    if (std::abs(tau(k)) * reach > 1.0) taus.push_back(tau(k));

  // single-linkage clustering in the sigma plane
  const int K = static_cast<int>(taus.size());
  std::vector<cplx> sig(K);
  for (int k = 0; k < K; ++k) sig[k] = c + 1.0 / taus[k];
  std::vector<int> label(K, -1);
  int nl = 0;
  for (int k = 0; k < K; ++k) {
    if (label[k] >= 0) continue;
    std::vector<int> stack{k};
    label[k] = nl;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < K; ++b)
        if (label[b] < 0 && std::abs(sig[a] - sig[b]) <= tol.root_cluster) {
          label[b] = nl;
          stack.push_back(b);
        }
    }
    ++nl;
  }
  std::vector<std::pair<cplx, int>> out;
  for (int l = 0; l < nl; ++l) {
    cplx mean_tau = 0.0;
    int cnt = 0;
    for (int k = 0; k < K; ++k)
      if (label[k] == l) {
        mean_tau += taus[k];
        ++cnt;
      }
    out.push_back({c + 1.0 / (mean_tau / static_cast<double>(cnt)), cnt});
  }
  return out;
}

// Mean of the roots inside |sigma - center| < r from the argument principle,
// sum sigma_k = (1/2 pi i) \oint sigma tr(p^{-1} p') dsigma; trapezoidal rule.
std::optional<cplx> contour_mean(const PencilSpec& p, cplx center, double r, int expect) {
  const int N = 64;
  cplx count = 0.0, moment = 0.0;
  for (int k = 0; k < N; ++k) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * k / N);
    const cplx s = center + r * e;
    MatrixSeries t = taylor_at(p, s, 1);
    Eigen::PartialPivLU<Mat> lu(t.coeffs[0]);
    const cplx tr = lu.solve(t.coeffs[1]).trace() * r * e / static_cast<double>(N);
    count += tr;
    moment += (s - center) * tr;
  }
  if (std::abs(count - static_cast<double>(expect)) > 1e-6) return std::nullopt;
  return center + moment / static_cast<double>(expect);
}

}  // namespace

std::vector<Root> boundary_spectrum(const PencilSpec& p, const Tolerances& tol,
                                    std::optional<double> window) {
  tol.validate(p.m);
  const double T = window ? *window : default_window(p);
  if (!(T > 0)) throw Error(ErrorCode::PreconditionViolated, "window must be positive");
  const int mu = p.mu();
  std::vector<Root> out;
  if (mu == 0) {
    if (sigma_min_ratio(p.coeffs[0]) < tol.rank_rel)
      throw Error(ErrorCode::PreconditionViolated, "constant singular pencil");
    return out;
  }

  // Perturbed eigenvalues at infinity (singular a_mu) can land inside the
  // window; they move with the expansion point while true roots do not.
  const auto [c1, c2] = expansion_points(p);
  const auto first = root_clusters(p, c1, T, tol);
  const auto second = root_clusters(p, c2, T, tol);
  const double lo = -static_cast<double>(p.m) - 1.0, hi = 1.0;
  for (const auto& [s_eig, cnt] : first) {
    bool confirmed = false;
    for (const auto& other : second) confirmed = confirmed || std::abs(other.first - s_eig) <= tol.root_cluster;
    if (!confirmed) continue;
    // polish the cluster center; companion eigenvalues lose digits for
    // badly scaled pencils
    double gap = 1.0;
    for (const auto& other : first)
      if (other.first != s_eig) gap = std::min(gap, std::abs(other.first - s_eig));
    const cplx s0 = contour_mean(p, s_eig, 0.4 * gap, cnt).value_or(s_eig);
    const double rc = tol.root_cluster;
    if (std::abs(std::abs(s0.real()) - T) <= rc || std::abs(s0.imag() - hi) <= rc ||
        std::abs(s0.imag() - lo) <= rc)
      throw Error(ErrorCode::WindowTooSmall, "root near the window boundary");
    if (std::abs(s0.real()) > T || s0.imag() > hi || s0.imag() < lo) continue;
    Root r;
    r.band = classify(s0.imag(), p.m, tol.line_snap);
    const double re = std::abs(s0.real()) <= 1e-13 * std::max(1.0, std::abs(s0)) ? 0.0 : s0.real();
    r.sigma0 = cplx(re, snapped_im(r.band, s0.imag(), p.m));
    r.alg_mult = cnt;
    out.push_back(r);
  }

  // star partners; symmetrize positions of off-line pairs
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i].star_partner >= 0) continue;
    cplx target = star(out[i].sigma0, p.m);
    double best = tol.root_cluster;
    int bj = -1;
    for (size_t j = 0; j < out.size(); ++j) {
      if (out[j].star_partner >= 0 && static_cast<int>(j) != static_cast<int>(i)) continue;
      double d = std::abs(out[j].sigma0 - target);
      if (d <= best) {
        best = d;
        bj = static_cast<int>(j);
      }
    }
    if (bj < 0) continue;
    out[i].star_partner = bj;
    out[bj].star_partner = static_cast<int>(i);
    if (bj != static_cast<int>(i)) {
      cplx avg = 0.5 * (out[i].sigma0 + star(out[bj].sigma0, p.m));
      out[i].sigma0 = avg;
      out[bj].sigma0 = star(avg, p.m);
    }
  }

  std::vector<int> order(out.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (out[a].sigma0.imag() != out[b].sigma0.imag()) return out[a].sigma0.imag() < out[b].sigma0.imag();
    return out[a].sigma0.real() < out[b].sigma0.real();
  });
  std::vector<int> where(out.size());
  for (size_t k = 0; k < order.size(); ++k) where[order[k]] = static_cast<int>(k);
  std::vector<Root> sorted;
  for (int i : order) {
    Root r = out[i];
    if (r.star_partner >= 0) r.star_partner = where[r.star_partner];
    sorted.push_back(r);
  }
  return sorted;
}

bool check_star_symmetry(const std::vector<Root>& roots, int m, const Tolerances& tol) {
  for (const auto& r : roots) {
    cplx target = star(r.sigma0, m);
    bool found = false;
    for (const auto& q : roots)
      if (std::abs(q.sigma0 - target) <= tol.root_cluster && q.alg_mult == r.alg_mult) found = true;
    if (!found) return false;
  }
  return true;
}

bool minimal_domain_flag(const std::vector<Root>& roots) {
  return std::none_of(roots.begin(), roots.end(),
                      [](const Root& r) { return r.band == Band::LowerEdge; });
}

int winding_count(const PencilSpec& p, cplx center, double radius, int samples) {
  double total = 0.0;
  cplx prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    double th = 2.0 * std::numbers::pi * k / samples;
    cplx d = evaluate(p, center + radius * std::polar(1.0, th)).determinant();
    if (k > 0) total += std::arg(d / prev);
    prev = d;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace indicial
