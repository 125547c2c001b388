#pragma once

#include <span>
#include <vector>

#include "ccx/error.hpp"

namespace ccx {

struct SimplexResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> weights;  // size n, basic solution
};

/// Minimizes cost . w subject to e w = rhs, w >= 0, with e given row-major
/// (m x n). Dense two-phase tableau simplex with Bland's rule, so it cannot
/// cycle. tol is the feasibility/optimality tolerance. When feasibility_only
/// is set, phase 2 is skipped and objective/weights are the phase-1 basic
/// point.
SimplexResult simplex_min(int m, int n, const double* e, const double* rhs,
                          const double* cost, double tol,
                          bool feasibility_only);

/// Convex-hull membership of x0 among `count` packed dim-dimensional points,
/// decided by LP feasibility of convex weights on coordinates normalized
/// around x0. tol is the one geometric tolerance.
bool in_convex_hull(int dim, std::span<const double> points, const double* x0,
                    double tol = 1e-9);

}  // namespace ccx
