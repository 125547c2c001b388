#include "ccx/lp.hpp"

#include <algorithm>
#include <cmath>

namespace ccx {

namespace {

struct Tableau {
  int m;       // active rows
  int n;       // structural columns
  int width;   // n + artificials
  std::vector<double> t;  // m x width
  std::vector<double> b;  // m
  std::vector<int> basis; // m, column index

  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * width + j]; }
  double at(int i, int j) const {
    return t[static_cast<std::size_t>(i) * width + j];
  }

  void pivot(int row, int col) {
    const double piv = at(row, col);
    const double inv = 1.0 / piv;
    for (int j = 0; j < width; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    b[row] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
      b[i] -= f * b[row];
    }
    basis[row] = col;
  }

  void drop_row(int row) {
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(row) * width,
            t.begin() + static_cast<std::ptrdiff_t>(row + 1) * width);
    b.erase(b.begin() + row);
    basis.erase(basis.begin() + row);
    --m;
  }
};

// One simplex phase with Bland's rule. `cost` has `width` entries; columns
// with j >= enter_limit never enter the basis.
void run_phase(Tableau& tab, const std::vector<double>& cost, int enter_limit,
               double tol) {
  const int max_iter = 20000 + 64 * (tab.width + tab.m);
  for (int iter = 0; iter < max_iter; ++iter) {
    // Reduced costs: r_j = cost_j - cost_B . column_j.
    int entering = -1;
    for (int j = 0; j < enter_limit; ++j) {
      double r = cost[j];
      for (int i = 0; i < tab.m; ++i) {
        const double cb = cost[tab.basis[i]];
        if (cb != 0.0) r -= cb * tab.at(i, j);
      }
      if (r < -tol) {
        entering = j;  // Bland: smallest index
        break;
      }
    }
    if (entering < 0) return;  // optimal
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tab.m; ++i) {
      const double a = tab.at(i, entering);
      if (a <= tol) continue;
      const double ratio = tab.b[i] / a;
      if (leaving < 0 || ratio < best_ratio) {
        leaving = i;
        best_ratio = ratio;
      } else if (ratio == best_ratio && tab.basis[i] < tab.basis[leaving]) {
        leaving = i;  // Bland: smallest basic index among ties
      }
    }
    require(leaving >= 0, ErrorCode::internal, "simplex: unbounded direction");
    tab.pivot(leaving, entering);
  }
  fail(ErrorCode::internal, "simplex: iteration guard exceeded");
}

}  // namespace

SimplexResult simplex_min(int m, int n, const double* e, const double* rhs,
                          const double* cost, double tol,
                          bool feasibility_only) {
  require(m >= 1 && n >= 1, ErrorCode::invalid_argument,
          "simplex needs at least one row and one column");
  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.width = n + m;
  tab.t.assign(static_cast<std::size_t>(m) * tab.width, 0.0);
  tab.b.assign(rhs, rhs + m);
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double flip = tab.b[i] < 0.0 ? -1.0 : 1.0;
    tab.b[i] *= flip;
    for (int j = 0; j < n; ++j) {
      tab.at(i, j) = flip * e[static_cast<std::size_t>(i) * n + j];
    }
    tab.at(i, n + i) = 1.0;
    tab.basis[i] = n + i;
  }

  // Phase 1: minimize the artificial sum.
  std::vector<double> phase1_cost(tab.width, 0.0);
  for (int j = n; j < tab.width; ++j) phase1_cost[j] = 1.0;
  run_phase(tab, phase1_cost, tab.width, tol);
  double infeas = 0.0;
  for (int i = 0; i < tab.m; ++i) {
    if (tab.basis[i] >= n) infeas += tab.b[i];
  }
  SimplexResult res;
  if (infeas > tol) {
    res.feasible = false;
    return res;
  }
  res.feasible = true;

  // Drive artificials out of the basis; drop redundant rows.
  for (int i = tab.m - 1; i >= 0; --i) {
    if (tab.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.drop_row(i);
    }
  }

  if (!feasibility_only) {
    std::vector<double> phase2_cost(tab.width, 0.0);
    for (int j = 0; j < n; ++j) phase2_cost[j] = cost ? cost[j] : 0.0;
    run_phase(tab, phase2_cost, n, tol);
  }

  res.weights.assign(n, 0.0);
  for (int i = 0; i < tab.m; ++i) {
    if (tab.basis[i] < n) res.weights[tab.basis[i]] = std::max(0.0, tab.b[i]);
  }
  res.objective = 0.0;
  if (cost) {
    for (int j = 0; j < n; ++j) {
      if (res.weights[j] != 0.0) res.objective += cost[j] * res.weights[j];
    }
  }
  return res;
}

bool in_convex_hull(int dim, std::span<const double> points, const double* x0,
                    double tol) {
  const int count = static_cast<int>(points.size()) / dim;
  require(count >= 1, ErrorCode::invalid_argument, "hull test needs points");
  double scale = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int k = 0; k < dim; ++k) {
      scale = std::max(scale, std::abs(points[i * dim + k] - x0[k]));
    }
  }
  if (scale == 0.0) return true;  // every point coincides with x0
  const int m = dim + 1;
  std::vector<double> e(static_cast<std::size_t>(m) * count);
  std::vector<double> rhs(m, 0.0);
  rhs[0] = 1.0;
  for (int i = 0; i < count; ++i) {
    e[i] = 1.0;
    for (int k = 0; k < dim; ++k) {
      e[static_cast<std::size_t>(k + 1) * count + i] =
          (points[i * dim + k] - x0[k]) / scale;
    }
  }
  return simplex_min(m, count, e.data(), rhs.data(), nullptr, tol, true)
      .feasible;
}

}  // namespace ccx
