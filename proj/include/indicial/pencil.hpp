#pragma once

#include <string>
#include <vector>

#include "indicial/numerics.hpp"

namespace indicial {

/// p(sigma) = sum_j a_j sigma^j with weight m.
struct PencilSpec {
  int m = 1;
  std::vector<Mat> coeffs;  // a_0 .. a_mu

  int mu() const { return static_cast<int>(coeffs.size()) - 1; }
  int n() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].rows()); }
  double max_coeff_norm() const;
};

inline cplx star(cplx sigma, int m) { return std::conj(sigma) - I * static_cast<double>(m); }

Mat evaluate(const PencilSpec& p, cplx sigma);

// Taylor coefficients p^{(k)}(sigma0)/k!, k = 0..order (zero past mu).
MatrixSeries taylor_at(const PencilSpec& p, cplx sigma0, int order);

// The pencil sigma -> p(sigma*)^*.
PencilSpec star_adjoint(const PencilSpec& p);
double symmetry_defect(const PencilSpec& p);
bool check_symmetry(const PencilSpec& p, const Tolerances& tol);

// Plain polynomial arithmetic on coefficient lists.
PencilSpec poly_mul(const PencilSpec& a, const PencilSpec& b);
PencilSpec poly_from_roots(int m, const std::vector<cplx>& roots, double lead = 1.0);

// u(sigma*)^* p(sigma) u(sigma); u uses p's weight.
PencilSpec congruence(const PencilSpec& p, const PencilSpec& u);

// C (I + sigma N) with N strictly lower triangular and C well conditioned:
// det is constant, so congruence by it adds no roots.
PencilSpec random_unimodular(int n, int m, unsigned seed, double strength = 0.3);

// Trailing zero coefficients are dropped (a_mu != 0 is enforced).
PencilSpec trimmed(const PencilSpec& p);

// Throws Error(ParseError) on malformed input, Error(NotSymmetric) is left
// to the caller.
PencilSpec pencil_from_json(const std::string& text);
std::string pencil_to_json(const PencilSpec& p);

}  // namespace indicial
