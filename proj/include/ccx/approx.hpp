#pragma once

#include <optional>

#include "ccx/grid.hpp"
#include "ccx/transforms.hpp"

namespace ccx {

/// Upper one-sided approximation: upper transform of the -M extension.
/// The computation runs on a grid enlarged by one locality radius and is
/// cropped back, so window-interior values match the unbounded-domain ones.
GridFunction upper_approx(const GridFunction& f_on_k, const SampleMask& k,
                          const TransformParams& params);

/// Lower one-sided approximation: lower transform of the +M extension.
/// Satisfies lower_approx(f) == -upper_approx(-f) bit for bit.
GridFunction lower_approx(const GridFunction& f_on_k, const SampleMask& k,
                          const TransformParams& params);

/// Midpoint of the two one-sided approximations.
GridFunction average_approx(const GridFunction& f_on_k, const SampleMask& k,
                            const TransformParams& params);

/// s-weighted combination: s on the lower side, 1-s on the upper. The blend
/// is computed from the nearer endpoint so the result always lies between
/// the one-sided approximations; s = 1/2 reproduces average_approx exactly.
GridFunction weighted_average_approx(const GridFunction& f_on_k,
                                     const SampleMask& k,
                                     const TransformParams& params);

/// Smoothed average: midpoint of the two mixed transforms at scales
/// (lambda, tau). Requires params.tau.
GridFunction mixed_average_approx(const GridFunction& f_on_k,
                                  const SampleMask& k,
                                  const TransformParams& params);

/// Per distinct sample point, the min and max of its values. Point order is
/// first occurrence.
struct MultivaluedBounds {
  ScatteredSamples lower;
  ScatteredSamples upper;
};
MultivaluedBounds multivalued_bounds(const ScatteredSamples& x);

/// K extended with constant far-field: nodes at distance >= r_ball from the
/// window center become members with value c0. Fails when the grid cannot
/// contain the ball plus the locality margin of the supplied params.
struct RingExtensionResult {
  GridFunction f;
  SampleMask mask;
};
RingExtensionResult ring_extension(const GridFunction& f_on_k,
                                   const SampleMask& k, double r_ball,
                                   double c0,
                                   const std::optional<TransformParams>&
                                       params = {});

struct InterpolationReport {
  double max_abs_dev = 0.0;
  std::int64_t worst_node = -1;
  bool pass = false;
};
/// Max |approx - f| over the member nodes; pass iff <= tol.
InterpolationReport interpolation_check(const GridFunction& approx,
                                        const GridFunction& f_on_k,
                                        const SampleMask& k, double tol);

/// Samples snapped to nearest nodes; coincident points collapse to their
/// min (lower) and max (upper) value. Points outside the window are
/// rejected.
struct RasterizedSamples {
  GridFunction lower;
  GridFunction upper;
  SampleMask mask;
};
RasterizedSamples rasterize_samples(const ScatteredSamples& x,
                                    const GridDomain& domain);

}  // namespace ccx
