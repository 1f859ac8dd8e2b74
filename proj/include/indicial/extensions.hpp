#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indicial/forms.hpp"

namespace indicial {

struct RootBlock {
  Root root;
  GermBasis germ;
  int offset = 0;   // first coordinate in the quotient
  int partner = -1; // index of the block at star(sigma0)
};

/// Ehat_max in germ coordinates. gram(i,j) = [b_i, b_j]; form = gram^T so
/// that [x, y] = y^* form x.
struct QuotientModel {
  PencilSpec p;
  Tolerances tol;
  double window = 0.0;
  std::vector<Root> all_roots;
  std::vector<RootBlock> blocks;
  Mat generator;
  Mat gram;
  Mat form;
  double cross_block_max = 0.0;  // largest non-paired block entry before zeroing
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(generator.rows()); }
  int m() const { return p.m; }
};

struct ExtensionSubspace {
  Mat basis;  // dim x k
  int dim() const { return static_cast<int>(basis.cols()); }
};

struct CanonicalBlock {
  int size = 0;
  int sign = 0;
  Mat chain;  // quotient coordinates, column k is u_{k+1}; shift u_{k+1} = u_k
};

QuotientModel build_quotient(const PencilSpec& p, const Tolerances& tol,
                             std::optional<double> window = std::nullopt);

ExtensionSubspace adjoint_subspace(const QuotientModel& Q, const ExtensionSubspace& D);
bool is_selfadjoint(const QuotientModel& Q, const ExtensionSubspace& D);
bool is_invariant(const QuotientModel& Q, const ExtensionSubspace& D);

Inertia deficiency_indices(const QuotientModel& Q);

// Chain basis at a critical block; a seed randomizes the choice of chain tops.
std::vector<CanonicalBlock> canonical_chain_basis(const QuotientModel& Q, int block,
                                                  std::optional<unsigned> seed = std::nullopt);

std::vector<CriticalRootInvariants> critical_invariants(const QuotientModel& Q);
bool sign_condition(const QuotientModel& Q);

ExtensionSubspace friedrichs_subspace(const QuotientModel& Q, int samples = 201);
ExtensionSubspace krein_subspace(const QuotientModel& Q, int samples = 201);
ExtensionSubspace construct_invariant_selfadjoint(const QuotientModel& Q);

// Invariant selfadjoint extension whose part below the critical line is the
// ghat-invariant subspace U of Ehat_-; requires the sign condition.
ExtensionSubspace invariant_extension_from(const QuotientModel& Q, const ExtensionSubspace& U);

bool order_leq(const QuotientModel& Q, const ExtensionSubspace& D1, const ExtensionSubspace& D2,
               int samples = 201);

bool semibounded_check(const PencilSpec& p, const Tolerances& tol, int samples = 201,
                       std::optional<double> window = std::nullopt);

// Spectral pieces.
ExtensionSubspace lower_space(const QuotientModel& Q);   // Im < -m/2
ExtensionSubspace upper_space(const QuotientModel& Q);   // Im > -m/2
ExtensionSubspace root_space(const QuotientModel& Q, int block);
ExtensionSubspace critical_halves(const QuotientModel& Q);

// Subspace algebra with principal-angle threshold.
inline constexpr double angle_tol = 1e-8;
bool subspace_contains(const Mat& big, const Mat& small);
bool subspace_equal(const Mat& a, const Mat& b);
Mat subspace_intersection(const Mat& a, const Mat& b);
Mat subspace_sum(const Mat& a, const Mat& b);

double selfadjoint_defect(const QuotientModel& Q);  // generator vs form, relative

}  // namespace indicial
