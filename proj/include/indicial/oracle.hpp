#pragma once

#include <vector>

#include "indicial/germs.hpp"

namespace indicial::oracle {

struct CutoffSpec {
  double x_flat = 0.5;
  double x_end = 1.0;
  int smoothness = 3;  // omega is C^smoothness; operators of degree mu need mu - 1

  double omega(double x) const;
};

struct QuasiTerm {
  cplx sigma0;
  int j = 0;
  Vec e;
};

/// omega(x) * sum e log^j(x) x^{i sigma0}
struct QuasiPolynomial {
  std::vector<QuasiTerm> terms;
  CutoffSpec cutoff;

  int n() const { return terms.empty() ? 0 : static_cast<int>(terms[0].e.size()); }
  static QuasiPolynomial from_log_coeffs(const LogCoefficients& u, const CutoffSpec& c = {});
};

/// c t^j e^{lambda t} tau^k with t = log x and tau the ramp variable
/// (x - x_flat) / (x_end - x_flat). Flat pieces have k = 0.
struct ExpTerm {
  cplx lambda;
  int j = 0;
  Vec c;
  int k = 0;
};

/// A function of t = log x: one exp-polynomial on (-inf, t_flat], another
/// on [t_flat, t_end], zero afterwards. With t_flat == t_end the function is
/// the indicator-truncated flat part.
struct PiecewiseFunction {
  std::vector<ExpTerm> flat;
  std::vector<ExpTerm> ramp;
  double t_flat = 0.0;
  double t_end = 0.0;
  int n = 0;
  double ramp_origin = 0.0;  // x_flat
  double ramp_width = 1.0;   // x_end - x_flat

  Vec at_t(double t) const;
  Vec operator()(double x) const;
};

PiecewiseFunction as_function(const QuasiPolynomial& u);
PiecewiseFunction indicator_function(const std::vector<ExpTerm>& terms, double x_end);

PiecewiseFunction apply_operator(const PencilSpec& p, const QuasiPolynomial& u);

struct QuadConfig {
  double eps = 1e-6;
  double rel_tol = 1e-10;
  int max_depth = 15;
};

cplx l2b_inner(const PiecewiseFunction& f, const PiecewiseFunction& g, const QuadConfig& q = {});

// Closed-form value of the same integral, for testing.
cplx l2b_inner_exact(const std::vector<ExpTerm>& f, const std::vector<ExpTerm>& g, double t_end);

cplx pairing_direct(const PencilSpec& p, const QuasiPolynomial& u, const QuasiPolynomial& v,
                    const QuadConfig& q = {});

// int_0^inf x^{-i sigma} u_c(x) dx/x for the component c of u; needs
// Im sigma > Im sigma0 for every term.
cplx mellin_numeric(const QuasiPolynomial& u, cplx sigma, int component = 0,
                    const QuadConfig& q = {});

// Extrapolated (sigma - sigma0)^{j+1} M u(sigma) at sigma -> sigma0.
cplx mellin_leading_coefficient(const QuasiPolynomial& u, cplx sigma0, int order,
                                int component = 0);

// All principal part coefficients f_1 .. f_order (columns) of M u at sigma0.
Mat mellin_principal_part(const QuasiPolynomial& u, cplx sigma0, int order, int component = 0);

// int_{-inf}^{T} t^j e^{a t} dt for Re a > 0.
cplx exp_poly_tail(cplx a, int j, double T);

}  // namespace indicial::oracle
