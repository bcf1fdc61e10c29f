// Simultaneous polynomial root finding.
#pragma once

#include "mcmullen/core.hpp"

#include <vector>

namespace mcm {

struct RootsResult {
  std::vector<cplx> roots;
  int iterations = 0;
  bool converged = false;
};

/// Aberth-Ehrlich iteration for sum coeffs[i] x^i (coeffs.back() != 0), in long double.
RootsResult aberth(const std::vector<cplx>& coeffs, int max_iter = 1000, double tol = 1e-15);

}  // namespace mcm
