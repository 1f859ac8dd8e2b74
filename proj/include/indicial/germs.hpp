#pragma once

#include <vector>

#include "indicial/pencil.hpp"

namespace indicial {

/// Principal part sum_l f_l (sigma - sigma0)^{-l}; column l-1 of f is f_l.
struct PrincipalPart {
  cplx sigma0;
  Mat f;  // n x L

  int L() const { return static_cast<int>(f.cols()); }
  Vec stacked() const;  // (f_1; ...; f_L)
  static PrincipalPart from_stacked(cplx sigma0, const Vec& v, int n);
};

/// Chain-ordered basis: for each Jordan block of size k at offset o,
/// shift maps basis[o] -> 0 and basis[o+i] -> basis[o+i-1].
struct GermBasis {
  cplx sigma0;
  int n = 0;
  int L = 0;
  std::vector<PrincipalPart> basis;
  Mat shift;
  std::vector<int> partial_mults;  // descending
  std::vector<int> block_offsets;

  int dim() const { return static_cast<int>(basis.size()); }
  Mat stacked() const;  // nL x dim
};

/// u = omega * sum_j e_j log^j(x) x^{i sigma0}; column j of e is e_j.
struct LogCoefficients {
  cplx sigma0;
  Mat e;  // n x (k+1)
};

GermBasis kernel_space(const PencilSpec& p, cplx sigma0, int L_max, const Tolerances& tol,
                       int expected_dim = -1);

// Block Toeplitz matrix whose null space is the germ space at sigma0.
Mat germ_condition_matrix(const PencilSpec& p, cplx sigma0, int L);

PrincipalPart germ_from_log_coeffs(const LogCoefficients& u);
LogCoefficients log_coeffs_from_germ(const PrincipalPart& f);

bool membership(const PencilSpec& p, cplx sigma0, const LogCoefficients& u, int L_max,
                const Tolerances& tol);

}  // namespace indicial
