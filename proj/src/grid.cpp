#include "ccx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccx {

namespace {
constexpr std::int64_t kNodeGuard = std::int64_t(1) << 27;  // 134M nodes
}

GridDomain::GridDomain(int dim, std::span<const std::int64_t> shape,
                       std::span<const double> spacing,
                       std::span<const double> origin)
    : dim_(dim) {
  require(dim >= 1 && dim <= kMaxDim, ErrorCode::invalid_argument,
          "grid dimension must be in [1,3]");
  require(shape.size() == static_cast<std::size_t>(dim) &&
              spacing.size() == static_cast<std::size_t>(dim) &&
              origin.size() == static_cast<std::size_t>(dim),
          ErrorCode::invalid_argument, "shape/spacing/origin length mismatch");
  count_ = 1;
  for (int k = 0; k < dim; ++k) {
    require(shape[k] >= 1, ErrorCode::invalid_argument,
            "axis node count must be >= 1");
    require(std::isfinite(spacing[k]) && spacing[k] > 0.0,
            ErrorCode::invalid_argument, "axis spacing must be positive");
    require(std::isfinite(origin[k]), ErrorCode::invalid_argument,
            "origin must be finite");
    shape_[k] = shape[k];
    spacing_[k] = spacing[k];
    origin_[k] = origin[k];
    count_ *= shape[k];
    require(count_ <= kNodeGuard, ErrorCode::size_guard, "grid too large");
  }
}

std::int64_t GridDomain::flatten(std::span<const std::int64_t> idx) const {
  std::int64_t flat = 0;
  for (int k = 0; k < dim_; ++k) {
    flat = flat * shape_[k] + idx[k];
  }
  return flat;
}

std::array<std::int64_t, kMaxDim> GridDomain::unflatten(std::int64_t flat) const {
  std::array<std::int64_t, kMaxDim> idx{0, 0, 0};
  for (int k = dim_ - 1; k >= 0; --k) {
    idx[k] = flat % shape_[k];
    flat /= shape_[k];
  }
  return idx;
}

std::array<double, kMaxDim> GridDomain::node_coords(std::int64_t flat) const {
  auto idx = unflatten(flat);
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0};
  for (int k = 0; k < dim_; ++k) x[k] = coord(k, idx[k]);
  return x;
}

bool GridDomain::operator==(const GridDomain& other) const {
  if (dim_ != other.dim_) return false;
  for (int k = 0; k < dim_; ++k) {
    if (shape_[k] != other.shape_[k] || spacing_[k] != other.spacing_[k] ||
        origin_[k] != other.origin_[k])
      return false;
  }
  return true;
}

GridFunction::GridFunction(GridDomain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  require(static_cast<std::int64_t>(values_.size()) == domain_.node_count(),
          ErrorCode::invalid_argument, "value count does not match grid shape");
  for (double v : values_) {
    require(std::isfinite(v), ErrorCode::invalid_argument,
            "grid values must be finite");
  }
}

GridFunction GridFunction::constant(const GridDomain& domain, double value) {
  return GridFunction(domain,
                      std::vector<double>(domain.node_count(), value));
}

SampleMask::SampleMask(GridDomain domain, std::vector<std::uint8_t> member)
    : domain_(std::move(domain)), member_(std::move(member)) {
  require(static_cast<std::int64_t>(member_.size()) == domain_.node_count(),
          ErrorCode::invalid_argument, "mask size does not match grid shape");
  for (auto& m : member_) m = m ? 1 : 0;
  member_count_ = std::count(member_.begin(), member_.end(), std::uint8_t(1));
  require(member_count_ > 0, ErrorCode::empty_mask, "mask has no member nodes");
}

std::vector<std::int64_t> SampleMask::member_indices() const {
  std::vector<std::int64_t> idx;
  idx.reserve(member_count_);
  for (std::int64_t i = 0; i < size(); ++i) {
    if (member_[i]) idx.push_back(i);
  }
  return idx;
}

std::vector<double> SampleMask::member_coords() const {
  std::vector<double> coords;
  coords.reserve(member_count_ * domain_.dim());
  for (std::int64_t i = 0; i < size(); ++i) {
    if (!member_[i]) continue;
    auto x = domain_.node_coords(i);
    for (int k = 0; k < domain_.dim(); ++k) coords.push_back(x[k]);
  }
  return coords;
}

SampleMask SampleMask::full(const GridDomain& domain) {
  return SampleMask(domain,
                    std::vector<std::uint8_t>(domain.node_count(), 1));
}

SampleMask SampleMask::inverted() const {
  std::vector<std::uint8_t> inv(member_.size());
  for (std::size_t i = 0; i < member_.size(); ++i) inv[i] = member_[i] ? 0 : 1;
  return SampleMask(domain_, std::move(inv));
}

double SampleMask::diameter() const {
  // Reduce to the per-axis index bounding box first; the farthest pair is a
  // pair of extreme members, so scanning members against each other within
  // the (small) candidate set found by pruning is enough. For simplicity and
  // exactness, prune to members on the bounding box faces; fall back to the
  // full O(m^2) scan when the member count is small.
  auto idx = member_indices();
  const std::int64_t m = static_cast<std::int64_t>(idx.size());
  std::vector<std::int64_t> candidates;
  if (m > 2048) {
    std::array<std::int64_t, kMaxDim> lo{}, hi{};
    for (int k = 0; k < domain_.dim(); ++k) {
      lo[k] = std::numeric_limits<std::int64_t>::max();
      hi[k] = std::numeric_limits<std::int64_t>::min();
    }
    for (auto f : idx) {
      auto ix = domain_.unflatten(f);
      for (int k = 0; k < domain_.dim(); ++k) {
        lo[k] = std::min(lo[k], ix[k]);
        hi[k] = std::max(hi[k], ix[k]);
      }
    }
    for (auto f : idx) {
      auto ix = domain_.unflatten(f);
      for (int k = 0; k < domain_.dim(); ++k) {
        if (ix[k] == lo[k] || ix[k] == hi[k]) {
          candidates.push_back(f);
          break;
        }
      }
    }
  } else {
    candidates = idx;
  }
  double best2 = 0.0;
  const int n = domain_.dim();
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    auto xa = domain_.node_coords(candidates[a]);
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      auto xb = domain_.node_coords(candidates[b]);
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        double d = xa[k] - xb[k];
        d2 += d * d;
      }
      best2 = std::max(best2, d2);
    }
  }
  return std::sqrt(best2);
}

ScatteredSamples::ScatteredSamples(int dim, std::vector<double> points,
                                   std::vector<double> values)
    : dim_(dim), points_(std::move(points)), values_(std::move(values)) {
  require(dim >= 1 && dim <= kMaxDim, ErrorCode::invalid_argument,
          "sample dimension must be in [1,3]");
  require(!values_.empty(), ErrorCode::invalid_argument,
          "sample set must be nonempty");
  require(points_.size() == values_.size() * static_cast<std::size_t>(dim),
          ErrorCode::invalid_argument, "point/value count mismatch");
  for (double p : points_) {
    require(std::isfinite(p), ErrorCode::invalid_argument,
            "sample points must be finite");
  }
  for (double v : values_) {
    require(std::isfinite(v), ErrorCode::invalid_argument,
            "sample values must be finite");
  }
}

void TransformParams::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  if (tau) {
    require(std::isfinite(*tau) && *tau > 0.0, ErrorCode::bad_params,
            "tau must be positive");
  }
  if (!m_infinite) {
    require(std::isfinite(m) && m > 0.0, ErrorCode::bad_params,
            "M must be positive");
  }
  require(s >= 0.0 && s <= 1.0, ErrorCode::bad_params, "s must be in [0,1]");
}

GridFunction extend_with_constant(const GridFunction& f_on_k,
                                  const SampleMask& k, double m,
                                  ExtendSign sign) {
  require(f_on_k.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  require(std::isfinite(m) && m > 0.0, ErrorCode::bad_params,
          "extension constant must be positive");
  require(m > bound_a0(f_on_k, k), ErrorCode::m_too_small,
          "extension constant must exceed max |f| on K");
  const double fill = sign == ExtendSign::plus ? m : -m;
  std::vector<double> out(f_on_k.values());
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (!k.is_member(i)) out[i] = fill;
  }
  return GridFunction(f_on_k.domain(), std::move(out));
}

double min_safe_m(double a0, double lambda, double d) {
  require(std::isfinite(a0) && a0 >= 0.0, ErrorCode::bad_params,
          "a0 must be nonnegative");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  require(std::isfinite(d) && d >= 0.0, ErrorCode::bad_params,
          "d must be nonnegative");
  return a0 + lambda * d * d;
}

double bound_a0(const GridFunction& f_on_k, const SampleMask& k) {
  require(f_on_k.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  double a0 = 0.0;
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (k.is_member(i)) a0 = std::max(a0, std::abs(f_on_k[i]));
  }
  return a0;
}

MedianShiftResult median_shift(const GridFunction& f_on_k, const SampleMask& k) {
  require(f_on_k.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (!k.is_member(i)) continue;
    lo = std::min(lo, f_on_k[i]);
    hi = std::max(hi, f_on_k[i]);
  }
  const double m = 0.5 * (hi + lo);
  std::vector<double> out(f_on_k.values());
  for (double& v : out) v -= m;
  return {GridFunction(f_on_k.domain(), std::move(out)), m};
}

}  // namespace ccx
