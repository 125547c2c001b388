#pragma once

#include <optional>
#include <span>

#include "ccx/grid.hpp"

namespace ccx {

/// Per-axis node radius limiting the search range of a sweep. A window whose
/// physical radius covers the locality radius is result-identical to the full
/// sweep for inputs bounded by M; smaller windows are the caller's risk.
struct Window {
  std::array<std::int64_t, kMaxDim> radius{0, 0, 0};

  static Window from_physical_radius(const GridDomain& domain, double r);
};

/// 2*sqrt(2)*sqrt(M/lambda): transform values of |f| <= M at a point depend
/// only on f within this ball.
double locality_radius(double m, double lambda);

/// Discrete inf-convolution with the quadratic, out[i] = min_j values[j] +
/// lambda*(h*(i-j))^2, via the linear-time envelope-of-parabolas sweep. Ties
/// between parabolas break toward the smaller index.
std::vector<double> lower_moreau_1d(std::span<const double> values,
                                    double lambda, double h);

GridFunction lower_moreau(const GridFunction& f, double lambda,
                          const std::optional<Window>& window = {});
GridFunction upper_moreau(const GridFunction& f, double lambda,
                          const std::optional<Window>& window = {});

namespace detail {

/// Sweep state that remembers, per node, the source value the current
/// envelope candidate came from and the accumulated per-axis squared index
/// offsets (signed: inf-convolutions add, sup-convolutions subtract). The
/// carried value is recomputed as base + sum_k c_k*q_k, so a candidate whose
/// offsets cancel reproduces its source value bit-for-bit. That keeps the
/// one-sided envelope orderings exact instead of exact-up-to-rounding.
struct SweepField {
  int dim = 0;
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};  // lambda * h_k^2
  std::vector<double> base;
  std::array<std::vector<std::int64_t>, kMaxDim> q;

  void init(const GridFunction& f, double lambda);
  /// Re-derives c for a new lambda while keeping base/q; used between the
  /// two stages of a mixed transform after collapsing to values.
  double canonical(std::int64_t i) const {
    double t = c[0] * static_cast<double>(q[0][i]);
    for (int k = 1; k < dim; ++k) t += c[k] * static_cast<double>(q[k][i]);
    return base[i] + t;
  }
  std::vector<double> canonical_all() const;
};

/// Runs the n axis sweeps of one Moreau envelope over the field in place.
/// sign +1: inf-convolution (lower envelope); sign -1: sup-convolution.
void moreau_pass(SweepField& field, const GridDomain& domain, int sign,
                 const std::optional<Window>& window);

}  // namespace detail

}  // namespace ccx
