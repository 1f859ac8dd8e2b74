#include "indicial/spectral_flow.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "indicial/forms.hpp"

namespace indicial {

namespace {

Eigen::VectorXd hermitian_eigs(const PencilSpec& p, cplx sigma) {
  Mat M = evaluate(p, sigma);
  M = (0.5 * (M + M.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool window_is_clean(const PencilSpec& p, cplx sigma0, double delta, double eps0, int kernel,
                     int samples) {
  for (int i = 0; i < samples; ++i) {
    double t = -delta + 2.0 * delta * i / (samples - 1);
    Eigen::VectorXd ev = hermitian_eigs(p, sigma0 + t);
    int small = 0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      double a = std::abs(ev(k));
      if (a > 0.9 * eps0 && a < 1.1 * eps0) return false;
      if (a < eps0) ++small;
    }
    if (std::abs(t) > 0.0 && small != kernel) return false;
  }
  return true;
}

int count_window(const Eigen::VectorXd& ev, double eps0) {
  int c = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) >= 0.0 && ev(k) < eps0) ++c;
  return c;
}

}  // namespace

FlowResult sf_at_root(const PencilSpec& p, cplx sigma0, const std::vector<Root>& roots,
                      const Tolerances& tol, const FlowOptions& opt) {
  if (!is_critical(sigma0, p.m)) throw Error(ErrorCode::NotCritical, "root is off the critical line");
  FlowResult r;
  r.sigma0 = sigma0;
  double dist = 0.2;
  for (const auto& q : roots) {
    double d = std::abs(q.sigma0 - sigma0);
    if (d > tol.root_cluster) dist = std::min(dist, d);
  }
  double delta = 0.5 * dist;
  const int n = p.n();
  const int samples = std::max(33, opt.samples);

  Eigen::VectorXd ev0 = hermitian_eigs(p, sigma0);
  const double scale = std::max(1.0, ev0.cwiseAbs().maxCoeff());
  double gap = -1.0;
  int kernel = 0;
  for (Eigen::Index k = 0; k < ev0.size(); ++k) {
    double a = std::abs(ev0(k));
    if (a <= tol.zero_eig_abs * scale)
      ++kernel;
    else
      gap = (gap < 0) ? a : std::min(gap, a);
  }

  for (int attempt = 0; attempt <= opt.max_halvings; ++attempt, delta *= 0.5) {
    double eps0;
    if (kernel < n) {
      eps0 = 0.5 * gap;
    } else {
      // every eigenvalue crosses: the window must contain them all
      double big = 0.0;
      for (int i = 0; i < samples; ++i) {
        double t = -delta + 2.0 * delta * i / (samples - 1);
        big = std::max(big, hermitian_eigs(p, sigma0 + t).cwiseAbs().maxCoeff());
      }
      eps0 = 2.0 * big + tol.zero_eig_abs;
    }
    if (!window_is_clean(p, sigma0, delta, eps0, kernel, samples)) continue;
    r.delta = delta;
    r.eps0 = eps0;
    r.sf = count_window(hermitian_eigs(p, sigma0 + delta), eps0) -
           count_window(hermitian_eigs(p, sigma0 - delta), eps0);
    return r;
  }
  throw Error(ErrorCode::AmbiguousWindow, "no clean spectral window found near the root");
}

int sf_total(const PencilSpec& p, const Tolerances& tol, std::optional<double> window) {
  std::vector<Root> roots = boundary_spectrum(p, tol, window);
  int s = 0;
  for (const auto& r : roots)
    if (r.band == Band::Critical) s += sf_at_root(p, r.sigma0, roots, tol).sf;
  return s;
}

}  // namespace indicial
