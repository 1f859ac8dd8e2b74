#include "indicial/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace indicial::oracle {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// smoothstep of order 2k+1 (C^k) on [0,1], lowest degree first
std::vector<double> smoothstep(int k) {
  std::vector<double> c(2 * k + 2, 0.0);
  for (int i = 0; i <= k; ++i)
    c[k + 1 + i] = binom(k + i, i) * binom(2 * k + 1, k - i) * ((i % 2) ? -1.0 : 1.0);
  return c;
}

Vec eval_terms(const std::vector<ExpTerm>& terms, double t, int n, double tau = 0.0) {
  Vec v = Vec::Zero(n);
  for (const auto& a : terms) v += (std::pow(t, a.j) * std::pow(tau, a.k) * std::exp(a.lambda * t)) * a.c;
  return v;
}

Vec eval_piece(const PiecewiseFunction& f, const std::vector<ExpTerm>& terms, double t) {
  return eval_terms(terms, t, f.n, (std::exp(t) - f.ramp_origin) / f.ramp_width);
}

using Key = std::tuple<double, double, int, int>;

struct Accum {
  std::map<Key, std::pair<Vec, double>> m;
  int n;
  void add(cplx lambda, int j, int tk, const Vec& c) {
    Key k{lambda.real(), lambda.imag(), j, tk};
    auto it = m.find(k);
    if (it == m.end())
      m.emplace(k, std::make_pair(c, c.norm()));
    else {
      it->second.first += c;
      it->second.second += c.norm();
    }
  }
  // terms that do not cancel to rel relative to their gross size
  std::vector<ExpTerm> terms(double rel) const {
    std::vector<ExpTerm> out;
    for (const auto& [k, v] : m)
      if (v.first.norm() > rel * v.second && v.first.norm() > 0.0)
        out.push_back({cplx(std::get<0>(k), std::get<1>(k)), std::get<2>(k), v.first, std::get<3>(k)});
    return out;
  }
};

// -i d/dt, using d tau/dt = tau + x_flat/w
std::vector<ExpTerm> scaling_derivative(const std::vector<ExpTerm>& in, double shift) {
  std::vector<ExpTerm> out;
  for (const auto& a : in) {
    out.push_back({a.lambda, a.j, (-I * a.lambda) * a.c, a.k});
    if (a.j > 0) out.push_back({a.lambda, a.j - 1, (-I * static_cast<double>(a.j)) * a.c, a.k});
    if (a.k > 0) {
      out.push_back({a.lambda, a.j, (-I * static_cast<double>(a.k)) * a.c, a.k});
      out.push_back({a.lambda, a.j, (-I * static_cast<double>(a.k) * shift) * a.c, a.k - 1});
    }
  }
  return out;
}

std::vector<ExpTerm> apply_pieces(const PencilSpec& p, const std::vector<ExpTerm>& u, double shift) {
  Accum acc{{}, p.n()};
  std::vector<ExpTerm> cur = u;
  const double m = static_cast<double>(p.m);
  for (int j = 0; j <= p.mu(); ++j) {
    if (j > 0) cur = scaling_derivative(cur, shift);
    for (const auto& a : cur) acc.add(a.lambda - m, a.j, a.k, p.coeffs[j] * a.c);
  }
  return acc.terms(1e-9);
}

// omega = 1 - sum_i s_i tau^i on the ramp
std::vector<ExpTerm> ramp_terms(const QuasiPolynomial& u) {
  std::vector<double> s = smoothstep(u.cutoff.smoothness);
  std::vector<ExpTerm> out;
  for (const auto& term : u.terms) {
    out.push_back({I * term.sigma0, term.j, term.e, 0});
    for (size_t k = 0; k < s.size(); ++k)
      if (s[k] != 0.0) out.push_back({I * term.sigma0, term.j, -s[k] * term.e, static_cast<int>(k)});
  }
  return out;
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b, const QuadConfig& q,
                       double& err, double& l1) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, q.max_depth, q.rel_tol, &err, &l1);
}

}  // namespace

double CutoffSpec::omega(double x) const {
  if (x <= x_flat) return 1.0;
  if (x >= x_end) return 0.0;
  std::vector<double> s = smoothstep(smoothness);
  double tau = (x - x_flat) / (x_end - x_flat);
  double v = 0.0;
  for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k) v = v * tau + s[k];
  return 1.0 - v;
}

QuasiPolynomial QuasiPolynomial::from_log_coeffs(const LogCoefficients& u, const CutoffSpec& c) {
  QuasiPolynomial q;
  q.cutoff = c;
  for (int j = 0; j < u.e.cols(); ++j)
    if (u.e.col(j).norm() > 0.0) q.terms.push_back({u.sigma0, j, u.e.col(j)});
  if (q.terms.empty()) q.terms.push_back({u.sigma0, 0, Vec::Zero(u.e.rows())});
  return q;
}

Vec PiecewiseFunction::at_t(double t) const {
  if (t <= t_flat) return eval_terms(flat, t, n);
  if (t <= t_end) return eval_piece(*this, ramp, t);
  return Vec::Zero(n);
}

Vec PiecewiseFunction::operator()(double x) const { return at_t(std::log(x)); }

PiecewiseFunction as_function(const QuasiPolynomial& u) {
  PiecewiseFunction f;
  f.n = u.n();
  for (const auto& term : u.terms) f.flat.push_back({I * term.sigma0, term.j, term.e});
  f.t_flat = std::log(u.cutoff.x_flat);
  f.t_end = std::log(u.cutoff.x_end);
  f.ramp_origin = u.cutoff.x_flat;
  f.ramp_width = u.cutoff.x_end - u.cutoff.x_flat;
  if (u.cutoff.x_end > u.cutoff.x_flat) f.ramp = ramp_terms(u);
  return f;
}

PiecewiseFunction indicator_function(const std::vector<ExpTerm>& terms, double x_end) {
  PiecewiseFunction f;
  f.n = terms.empty() ? 0 : static_cast<int>(terms[0].c.size());
  f.flat = terms;
  f.t_flat = f.t_end = std::log(x_end);
  return f;
}

PiecewiseFunction apply_operator(const PencilSpec& p, const QuasiPolynomial& u) {
  if (u.cutoff.x_end > u.cutoff.x_flat && u.cutoff.smoothness < p.mu() - 1)
    throw Error(ErrorCode::PreconditionViolated, "cutoff is not smooth enough for the operator order");
  PiecewiseFunction f = as_function(u);
  PiecewiseFunction g;
  g.n = p.n();
  g.t_flat = f.t_flat;
  g.t_end = f.t_end;
  g.ramp_origin = f.ramp_origin;
  g.ramp_width = f.ramp_width;
  const double shift = f.ramp_origin / f.ramp_width;
  g.flat = apply_pieces(p, f.flat, shift);
  g.ramp = apply_pieces(p, f.ramp, shift);
  return g;
}

cplx exp_poly_tail(cplx a, int j, double T) {
  if (!(a.real() > 0.0)) throw Error(ErrorCode::NonIntegrable, "exponent with non-positive real part");
  cplx sum = 0.0;
  double fall = 1.0;  // j!/(j-k)!
  cplx apow = a;
  for (int k = 0; k <= j; ++k) {
    if (k > 0) {
      fall *= (j - k + 1);
      apow *= a;
    }
    sum += ((k % 2) ? -1.0 : 1.0) * fall * std::pow(T, j - k) / apow;
  }
  return std::exp(a * T) * sum;
}

cplx l2b_inner_exact(const std::vector<ExpTerm>& f, const std::vector<ExpTerm>& g, double t_end) {
  cplx acc = 0.0;
  for (const auto& a : f)
    for (const auto& b : g) {
      cplx w = b.c.dot(a.c);
      if (w == 0.0) continue;
      acc += w * exp_poly_tail(a.lambda + std::conj(b.lambda), a.j + b.j, t_end);
    }
  return acc;
}

cplx l2b_inner(const PiecewiseFunction& f, const PiecewiseFunction& g, const QuadConfig& q) {
  const double t0 = std::log(q.eps);
  const double tmax = std::min(f.t_end, g.t_end);
  if (t0 > std::min(f.t_flat, g.t_flat))
    throw Error(ErrorCode::PreconditionViolated, "tail cutoff beyond the flat region");
  // tail (0, eps] in closed form; exponents are checked there
  cplx tail = 0.0;
  for (const auto& a : f.flat)
    for (const auto& b : g.flat) {
      cplx w = b.c.dot(a.c);
      if (std::abs(w) == 0.0) continue;
      cplx lam = a.lambda + std::conj(b.lambda);
      if (!(lam.real() > 0.0)) throw Error(ErrorCode::NonIntegrable, "integrand not integrable at x = 0");
      tail += w * exp_poly_tail(lam, a.j + b.j, t0);
    }
  if (tmax <= t0) return tail;

  std::vector<double> cuts{t0, tmax};
  for (double c : {f.t_flat, f.t_end, g.t_flat, g.t_end})
    if (c > t0 && c < tmax) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  cplx total = tail;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a <= 0.0) continue;
    const double mid = 0.5 * (a + b);
    // evaluate each piece with the branch valid on the open interval
    auto piece = [mid](const PiecewiseFunction& h) -> const std::vector<ExpTerm>* {
      if (mid < h.t_flat) return &h.flat;
      if (mid < h.t_end) return &h.ramp;
      return nullptr;
    };
    const auto* pf = piece(f);
    const auto* pg = piece(g);
    if (!pf || !pg || pf->empty() || pg->empty()) continue;
    auto integrand = [&](double t) { return eval_piece(g, *pg, t).dot(eval_piece(f, *pf, t)); };
    double err, l1;
    cplx v = integrate_complex(integrand, a, b, q, err, l1);
    if (err > 1e-9 * l1 + 1e-15)
      throw Error(ErrorCode::QuadratureNotConverged, "adaptive quadrature did not reach the target");
    total += v;
  }
  return total;
}

cplx pairing_direct(const PencilSpec& p, const QuasiPolynomial& u, const QuasiPolynomial& v, const QuadConfig& q) {
  PiecewiseFunction Au = apply_operator(p, u), Av = apply_operator(p, v);
  PiecewiseFunction fu = as_function(u), fv = as_function(v);
  return (l2b_inner(Au, fv, q) - l2b_inner(fu, Av, q)) / I;
}

cplx mellin_numeric(const QuasiPolynomial& u, cplx sigma, int component, const QuadConfig& q) {
  for (const auto& t : u.terms)
    if (!(sigma.imag() > t.sigma0.imag()))
      throw Error(ErrorCode::NonIntegrable, "Mellin integral diverges at x = 0 for this sigma");
  QuasiPolynomial uc = u;
  for (auto& t : uc.terms) t.e = Vec::Constant(1, t.e(component));
  PiecewiseFunction f = as_function(uc);
  // <f, g> = f conj(g), so g = conj(x^{-i sigma}) = x^{i conj(sigma)}
  PiecewiseFunction g = indicator_function({{I * std::conj(sigma), 0, Vec::Ones(1)}}, std::exp(f.t_end));
  return l2b_inner(f, g, q);
}

cplx mellin_leading_coefficient(const QuasiPolynomial& u, cplx sigma0, int order, int component) {
  const int K = 9;
  std::vector<cplx> h(K), F(K);
  for (int k = 0; k < K; ++k) {
    h[k] = I * (0.05 * (k + 1));
    F[k] = std::pow(h[k], order) * mellin_numeric(u, sigma0 + h[k], component);
  }
  // Neville extrapolation to h = 0
  for (int lvl = 1; lvl < K; ++lvl)
    for (int k = 0; k + lvl < K; ++k)
      F[k] = (h[k + lvl] * F[k] - h[k] * F[k + 1]) / (h[k + lvl] - h[k]);
  return F[0];
}

Mat mellin_principal_part(const QuasiPolynomial& u, cplx sigma0, int order, int component) {
  // (sigma - sigma0)^order M u is a polynomial plus an entire remainder;
  // fit it at points above sigma0 and read off the low coefficients.
  const int K = 14;
  Mat V(K, K);
  Vec F(K);
  for (int k = 0; k < K; ++k) {
    cplx h = I * (0.04 * (k + 1));
    F(k) = std::pow(h, order) * mellin_numeric(u, sigma0 + h, component);
    for (int c = 0; c < K; ++c) V(k, c) = std::pow(h, c);
  }
  Vec c = V.fullPivLu().solve(F);
  Mat f(1, order);
  for (int l = 1; l <= order; ++l) f(0, l - 1) = c(order - l);
  return f;
}

}  // namespace indicial::oracle
