#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indicial/pencil.hpp"

namespace indicial {

enum class Band { Above, UpperEdge, StripUpper, Critical, StripLower, LowerEdge, Below };

const char* band_name(Band b);

struct Root {
  cplx sigma0;
  int alg_mult = 1;
  Band band = Band::Above;
  int star_partner = -1;  // index into the same list, -1 if none found
};

inline bool in_open_strip(Band b) {
  return b == Band::StripUpper || b == Band::Critical || b == Band::StripLower;
}

// Default |Re sigma| bound: 10 (1 + max|a_j| / sigma_min(a_mu)), capped at
// max_default_window when a_mu is (nearly) singular.
inline constexpr double max_default_window = 1e3;
double default_window(const PencilSpec& p);

// Roots of det p in |Re| <= T, -m-1 <= Im <= 1, sorted by (Im, Re).
std::vector<Root> boundary_spectrum(const PencilSpec& p, const Tolerances& tol,
                                    std::optional<double> window = std::nullopt);

bool check_star_symmetry(const std::vector<Root>& roots, int m, const Tolerances& tol);
bool minimal_domain_flag(const std::vector<Root>& roots);

// Sum of alg_mult inside a circle, by the argument principle on det p.
int winding_count(const PencilSpec& p, cplx center, double radius, int samples = 2048);

}  // namespace indicial
