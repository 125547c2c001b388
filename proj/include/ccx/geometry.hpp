#pragma once

#include <span>

#include "ccx/grid.hpp"
#include "ccx/moduli.hpp"

namespace ccx {

enum class RadiusKind { density, convex_density };

/// Per-node nonnegative radius values (density or convex-density). Nodes
/// where the quantity is undefined (outside the hull) carry -1.
struct RadiusField {
  GridDomain domain;
  std::vector<double> r;
  RadiusKind kind = RadiusKind::density;

  static constexpr double kUndefined = -1.0;
  bool defined(std::int64_t i) const { return r[i] >= 0.0; }
};

/// Exact squared Euclidean distance to the member set, per node, via the
/// separable parabola-envelope sweep.
GridFunction squared_distance_field(const SampleMask& k);

/// Max of the two directed max-min node distances, in physical units.
double hausdorff_distance(const SampleMask& k, const SampleMask& e);

/// Hull membership and convex-density machinery for one mask. The pruned
/// candidate set (1-D interval, 2-D hull vertices, 3-D all members) is built
/// once; queries are const and safe to run concurrently. Hull feasibility is
/// decided by the LP with the single geometric tolerance 1e-9 on normalized
/// coordinates.
class HullIndex {
public:
  explicit HullIndex(const SampleMask& k);

  int dim() const { return dim_; }
  bool contains(std::span<const double> x) const;
  /// Materializes co[K] node membership over the mask's domain.
  SampleMask co_member_field() const;

private:
  int dim_;
  GridDomain domain_;
  std::vector<double> pruned_;  // packed candidate coords
  double lo_ = 0.0, hi_ = 0.0;  // 1-D interval
};

/// x in co[K-nodes]?
bool co_membership(std::span<const double> x, const SampleMask& k);
SampleMask co_member_field(const SampleMask& k);

/// Distance-to-K per node plus the sup over co[K] convention for summaries.
RadiusField density_radius(const SampleMask& k);
double sup_over(const RadiusField& field, const SampleMask& region);

/// Smallest r such that x lies in the convex hull of the members within the
/// closed r-ball around x; exact over the sorted distinct member distances.
/// Fails with not_in_hull when x is outside co[K].
double convex_density_radius(std::span<const double> x, const SampleMask& k);
/// Point-list variant used on scattered sample sets.
double convex_density_radius_points(int dim, std::span<const double> points,
                                    std::span<const double> x);
RadiusField convex_density_field(const SampleMask& k);

/// min over member nodes of |y - x| - sqrt(f(y)/lambda). Requires f > 0 on
/// the members.
double dist_like(std::span<const double> x, const SampleMask& k,
                 const GridFunction& f, double lambda);
/// -sqrt(lambda) * min(0, dist_like).
double big_d(std::span<const double> x, const SampleMask& k,
             const GridFunction& f, double lambda);
GridFunction big_d_squared_field(const SampleMask& k, const GridFunction& f,
                                 double lambda);

/// 2*sqrt(lambda*M)*d_H + 2*sqrt(M)*omega(d_H), with omega the (concave
/// majorant of the) modulus of sqrt(f). A linear omega with slope
/// L/(2*sqrt(alpha)) reproduces the Lipschitz variant.
double stability_bound(double lambda, double m, const ModulusModel& omega,
                       double d_h);
/// (2*sqrt(lambda*M) + L*sqrt(M/alpha)) * d_H.
double stability_bound_lipschitz(double lambda, double m, double l,
                                 double alpha, double d_h);

}  // namespace ccx
