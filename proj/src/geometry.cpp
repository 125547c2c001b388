#include "ccx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccx/lp.hpp"
#include "ccx/moreau.hpp"
#include "ccx/parallel.hpp"

namespace ccx {

namespace {

constexpr double kFar = 1e30;
constexpr double kHullTol = 1e-9;

// Monotone-chain convex hull over packed 2-D points. Returns hull vertex
// coordinates; dropping interior and edge-interior points never changes hull
// membership answers.
std::vector<double> hull_vertices_2d(std::span<const double> pts) {
  const std::size_t n = pts.size() / 2;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[2 * a] != pts[2 * b]) return pts[2 * a] < pts[2 * b];
    return pts[2 * a + 1] < pts[2 * b + 1];
  });
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[2 * a] - pts[2 * o]) * (pts[2 * b + 1] - pts[2 * o + 1]) -
           (pts[2 * a + 1] - pts[2 * o + 1]) * (pts[2 * b] - pts[2 * o]);
  };
  auto build = [&](bool reverse) {
    std::vector<std::size_t> chain;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = reverse ? order[n - 1 - step] : order[step];
      while (chain.size() >= 2 &&
             cross(chain[chain.size() - 2], chain[chain.size() - 1], i) <=
                 0.0) {
        chain.pop_back();
      }
      chain.push_back(i);
    }
    return chain;
  };
  const std::vector<std::size_t> lower = build(false);
  const std::vector<std::size_t> upper = build(true);
  std::vector<std::size_t> hull(lower.begin(), lower.end() - 1);
  hull.insert(hull.end(), upper.begin(), upper.end() - 1);
  if (hull.empty()) hull.push_back(order[0]);  // all points coincide
  std::vector<double> out;
  out.reserve(hull.size() * 2);
  for (std::size_t i : hull) {
    out.push_back(pts[2 * i]);
    out.push_back(pts[2 * i + 1]);
  }
  return out;
}

std::vector<double> prune_candidates(int dim, std::vector<double> pts) {
  if (dim != 2 || pts.size() <= 2 * 16) return pts;
  return hull_vertices_2d(pts);
}

struct MemberData {
  std::vector<double> coords;  // packed
  std::vector<double> shift;   // sqrt(f/lambda) per member, for dist_like
};

MemberData member_shift_data(const SampleMask& k, const GridFunction& f,
                             double lambda) {
  require(f.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  MemberData md;
  md.coords = k.member_coords();
  md.shift.reserve(k.member_count());
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (!k.is_member(i)) continue;
    require(f[i] > 0.0, ErrorCode::bad_params,
            "dist_like requires f > 0 on member nodes");
    md.shift.push_back(std::sqrt(f[i] / lambda));
  }
  return md;
}

double dist_like_impl(std::span<const double> x, const MemberData& md,
                      int dim) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = md.shift.size();
  for (std::size_t j = 0; j < m; ++j) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = md.coords[j * dim + k] - x[k];
      d2 += d * d;
    }
    best = std::min(best, std::sqrt(d2) - md.shift[j]);
  }
  return best;
}

}  // namespace

GridFunction squared_distance_field(const SampleMask& k) {
  const GridDomain& dom = k.domain();
  std::vector<double> seed(dom.node_count());
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    seed[i] = k.is_member(i) ? 0.0 : kFar;
  }
  detail::SweepField field;
  field.init(GridFunction(dom, std::move(seed)), 1.0);
  detail::moreau_pass(field, dom, +1, {});
  return GridFunction(dom, field.canonical_all());
}

double hausdorff_distance(const SampleMask& k, const SampleMask& e) {
  require(k.domain() == e.domain(), ErrorCode::domain_mismatch,
          "masks live on different domains");
  const GridFunction dk = squared_distance_field(k);
  const GridFunction de = squared_distance_field(e);
  double worst2 = 0.0;
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (e.is_member(i)) worst2 = std::max(worst2, dk[i]);
    if (k.is_member(i)) worst2 = std::max(worst2, de[i]);
  }
  return std::sqrt(worst2);
}

HullIndex::HullIndex(const SampleMask& k)
    : dim_(k.domain().dim()), domain_(k.domain()) {
  std::vector<double> coords = k.member_coords();
  if (dim_ == 1) {
    lo_ = *std::min_element(coords.begin(), coords.end());
    hi_ = *std::max_element(coords.begin(), coords.end());
  } else {
    pruned_ = prune_candidates(dim_, std::move(coords));
  }
}

bool HullIndex::contains(std::span<const double> x) const {
  if (dim_ == 1) return x[0] >= lo_ && x[0] <= hi_;
  return in_convex_hull(dim_, pruned_, x.data(), kHullTol);
}

SampleMask HullIndex::co_member_field() const {
  std::vector<std::uint8_t> member(domain_.node_count(), 0);
  parallel_for(domain_.node_count(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const auto x = domain_.node_coords(i);
      member[i] = contains(std::span<const double>(x.data(), dim_)) ? 1 : 0;
    }
  });
  return SampleMask(domain_, std::move(member));
}

bool co_membership(std::span<const double> x, const SampleMask& k) {
  return HullIndex(k).contains(x);
}

SampleMask co_member_field(const SampleMask& k) {
  return HullIndex(k).co_member_field();
}

RadiusField density_radius(const SampleMask& k) {
  GridFunction d2 = squared_distance_field(k);
  RadiusField field{k.domain(), std::vector<double>(d2.values().size()),
                    RadiusKind::density};
  for (std::size_t i = 0; i < field.r.size(); ++i) {
    field.r[i] = std::sqrt(d2.values()[i]);
  }
  return field;
}

double sup_over(const RadiusField& field, const SampleMask& region) {
  require(field.domain == region.domain(), ErrorCode::domain_mismatch,
          "field and region domains differ");
  double sup = 0.0;
  for (std::int64_t i = 0; i < region.size(); ++i) {
    if (region.is_member(i) && field.defined(i)) {
      sup = std::max(sup, field.r[i]);
    }
  }
  return sup;
}

double convex_density_radius_points(int dim, std::span<const double> points,
                                    std::span<const double> x) {
  const std::size_t count = points.size() / dim;
  require(count >= 1, ErrorCode::invalid_argument, "empty point set");

  std::vector<std::pair<double, std::size_t>> by_dist(count);
  for (std::size_t i = 0; i < count; ++i) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = points[i * dim + k] - x[k];
      d2 += d * d;
    }
    by_dist[i] = {std::sqrt(d2), i};
  }
  std::sort(by_dist.begin(), by_dist.end());

  std::vector<double> dists;
  dists.reserve(count);
  for (const auto& [d, i] : by_dist) {
    if (dists.empty() || d > dists.back()) dists.push_back(d);
  }

  auto feasible_at = [&](double r) {
    std::vector<double> subset;
    for (const auto& [d, i] : by_dist) {
      if (d > r) break;
      for (int k = 0; k < dim; ++k) subset.push_back(points[i * dim + k]);
    }
    subset = prune_candidates(dim, std::move(subset));
    return in_convex_hull(dim, subset, x.data(), kHullTol);
  };

  require(feasible_at(dists.back()), ErrorCode::not_in_hull,
          "point is outside the convex hull of the set");
  // The infimum is attained at one of the distinct distances: bisect.
  std::size_t lo = 0, hi = dists.size() - 1;
  if (feasible_at(dists[0])) return dists[0] == 0.0 ? 0.0 : dists[0];
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible_at(dists[mid])) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return dists[hi];
}

double convex_density_radius(std::span<const double> x, const SampleMask& k) {
  return convex_density_radius_points(k.domain().dim(), k.member_coords(), x);
}

RadiusField convex_density_field(const SampleMask& k) {
  const GridDomain& dom = k.domain();
  const int dim = dom.dim();
  const std::vector<double> coords = k.member_coords();
  HullIndex hull(k);
  RadiusField field{dom, std::vector<double>(dom.node_count(),
                                             RadiusField::kUndefined),
                    RadiusKind::convex_density};
  parallel_for(dom.node_count(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const auto xc = dom.node_coords(i);
      const std::span<const double> x(xc.data(), dim);
      if (!hull.contains(x)) continue;
      field.r[i] = convex_density_radius_points(dim, coords, x);
    }
  });
  return field;
}

double dist_like(std::span<const double> x, const SampleMask& k,
                 const GridFunction& f, double lambda) {
  const MemberData md = member_shift_data(k, f, lambda);
  return dist_like_impl(x, md, k.domain().dim());
}

double big_d(std::span<const double> x, const SampleMask& k,
             const GridFunction& f, double lambda) {
  const double d = dist_like(x, k, f, lambda);
  return -std::sqrt(lambda) * std::min(0.0, d);
}

GridFunction big_d_squared_field(const SampleMask& k, const GridFunction& f,
                                 double lambda) {
  const GridDomain& dom = k.domain();
  const MemberData md = member_shift_data(k, f, lambda);
  const int dim = dom.dim();
  const double root_lambda = std::sqrt(lambda);
  std::vector<double> out(dom.node_count());
  parallel_for(dom.node_count(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const auto xc = dom.node_coords(i);
      const double d =
          dist_like_impl(std::span<const double>(xc.data(), dim), md, dim);
      const double big = -root_lambda * std::min(0.0, d);
      out[i] = big * big;
    }
  });
  return GridFunction(dom, std::move(out));
}

double stability_bound(double lambda, double m, const ModulusModel& omega,
                       double d_h) {
  require(std::isfinite(d_h) && d_h >= 0.0, ErrorCode::bad_params,
          "Hausdorff distance must be nonnegative");
  require(std::isfinite(lambda) && lambda > 0.0 && std::isfinite(m) && m > 0.0,
          ErrorCode::bad_params, "lambda and M must be positive");
  return 2.0 * std::sqrt(lambda * m) * d_h +
         2.0 * std::sqrt(m) * omega.eval_cav(d_h);
}

double stability_bound_lipschitz(double lambda, double m, double l,
                                 double alpha, double d_h) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::bad_params,
          "alpha must be positive");
  require(std::isfinite(l) && l >= 0.0, ErrorCode::bad_params,
          "L must be nonnegative");
  return (2.0 * std::sqrt(lambda * m) + l * std::sqrt(m / alpha)) * d_h;
}

}  // namespace ccx
