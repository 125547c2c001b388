#pragma once

#include <span>
#include <vector>

#include "ccx/grid.hpp"

namespace ccx {
namespace oracle {

/// At most dim+1 support points with convex weights realizing a convex
/// envelope value at the query point.
struct CaratheodoryCertificate {
  std::vector<int> support;      // indices into the input point list
  std::vector<double> weights;   // same length as support, >= 0, sums to 1
  double value = 0.0;
};

/// Value of the convex envelope of the data (points_i, values_i) at x0,
/// via the small LP over convex weights. Fails with not_in_hull when x0 is
/// outside the hull of the points. Instances are capped at 512 points.
CaratheodoryCertificate convex_envelope_value(int dim,
                                              std::span<const double> points,
                                              std::span<const double> values,
                                              const double* x0);

/// Exact lower transform of the +infinity extension of a finite sample set,
/// evaluated at x0: the envelope of f_i + lambda*|x_i - x0|^2 over the
/// samples. Only sample points carry finite values, so the envelope is over
/// the samples alone.
double lower_transform_exact(const ScatteredSamples& samples, const double* x0,
                             double lambda);

/// Exact upper transform of the -infinity extension at x0.
double upper_transform_exact(const ScatteredSamples& samples, const double* x0,
                             double lambda);

/// Mean of the two exact one-sided transforms: the M = infinity average
/// approximation at x0.
double average_approx_exact(const ScatteredSamples& samples, const double* x0,
                            double lambda);

enum class MoreauKind { lower, upper };

/// Quadratic-time direct Moreau envelope over all node pairs; the mutual
/// oracle for the separable sweep. Guarded to 65536 nodes.
GridFunction moreau_bruteforce(const GridFunction& f, double lambda,
                               MoreauKind kind);

/// Closed form of the upper transform of a single spike of height alpha:
/// lambda*(d - sqrt(alpha/lambda))^2 inside the support radius, 0 beyond,
/// where d is the distance to the spike.
double spike_upper_value(double alpha, double lambda, double distance);

}  // namespace oracle
}  // namespace ccx
