#pragma once

#include <vector>

#include "indicial/roots.hpp"

namespace indicial {

struct FlowResult {
  cplx sigma0;
  double delta = 0.0;
  double eps0 = 0.0;
  int sf = 0;
};

struct FlowOptions {
  int samples = 33;
  int max_halvings = 8;
};

// `roots` supplies the distance to the nearest other root.
FlowResult sf_at_root(const PencilSpec& p, cplx sigma0, const std::vector<Root>& roots,
                      const Tolerances& tol, const FlowOptions& opt = {});

int sf_total(const PencilSpec& p, const Tolerances& tol,
             std::optional<double> window = std::nullopt);

}  // namespace indicial
