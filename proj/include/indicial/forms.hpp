#pragma once

#include <vector>

#include "indicial/germs.hpp"
#include "indicial/roots.hpp"

namespace indicial {

struct EllCounts {
  int ell = 0;
  int m0 = 0;
  int m_plus = 0;
  int m_minus = 0;
};

struct CriticalRootInvariants {
  cplx sigma0;
  std::vector<EllCounts> per_ell;  // ell = 1 .. ell_max
  int signature_contribution = 0;
};

struct NormalFormBlock {
  int ell = 0;
  int n_plus = 0;
  int n_minus = 0;
  bool operator==(const NormalFormBlock&) const = default;
};

using NormalFormBlocks = std::vector<NormalFormBlock>;  // sorted by ell, ell >= 1

// res_{sigma0} <p(sigma) u(sigma), v(sigma*)> for u at sigma0, v at star(sigma0).
cplx residue_pairing(const PencilSpec& p, const PrincipalPart& u, const PrincipalPart& v,
                     const Tolerances& tol);

// Same residue for arbitrary root pairs; vanishes up to the germ residual
// when v is not attached to star(sigma0).
cplx cross_pairing(const PencilSpec& p, const PrincipalPart& u, const PrincipalPart& v);

// entry (i,j) = residue_pairing(left[i], right[j])
Mat gram_matrix(const PencilSpec& p, const std::vector<PrincipalPart>& left,
                const std::vector<PrincipalPart>& right, const Tolerances& tol);

CriticalRootInvariants ell_invariants(const PencilSpec& p, cplx sigma0, const GermBasis& germ,
                                      const Tolerances& tol);

// Same counts from an explicit form matrix H ([x,y] = y^* H x) and shift S.
CriticalRootInvariants ell_invariants_from(cplx sigma0, const Mat& H, const Mat& S,
                                           const std::vector<int>& partial_mults,
                                           const Tolerances& tol);

NormalFormBlocks normal_form(const PencilSpec& p, cplx sigma0, int alg_mult, const Tolerances& tol);

// Blocks of the ell-form counts, for comparison with normal_form.
NormalFormBlocks blocks_of(const CriticalRootInvariants& inv);

int total_signature(const std::vector<CriticalRootInvariants>& per_root);

bool is_critical(cplx sigma0, int m);

}  // namespace indicial
