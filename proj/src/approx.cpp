#include "ccx/approx.hpp"

#include <cmath>
#include <map>

#include "ccx/parallel.hpp"

namespace ccx {

namespace {

struct PadSpec {
  GridDomain padded;
  std::array<std::int64_t, kMaxDim> off{0, 0, 0};
};

PadSpec make_pad(const GridDomain& dom, double physical_radius) {
  std::array<std::int64_t, kMaxDim> shape{1, 1, 1};
  std::array<double, kMaxDim> spacing{1.0, 1.0, 1.0};
  std::array<double, kMaxDim> origin{0.0, 0.0, 0.0};
  std::array<std::int64_t, kMaxDim> off{0, 0, 0};
  for (int k = 0; k < dom.dim(); ++k) {
    const std::int64_t pad = static_cast<std::int64_t>(
        std::ceil(physical_radius / dom.spacing(k)));
    off[k] = pad;
    shape[k] = dom.extent(k) + 2 * pad;
    spacing[k] = dom.spacing(k);
    origin[k] = dom.origin(k) - dom.spacing(k) * static_cast<double>(pad);
  }
  return PadSpec{
      GridDomain(dom.dim(),
                 std::span<const std::int64_t>(shape.data(), dom.dim()),
                 std::span<const double>(spacing.data(), dom.dim()),
                 std::span<const double>(origin.data(), dom.dim())),
      off};
}

/// The +/-M extension of f_on_k laid out on the padded domain; padding nodes
/// count as non-members.
GridFunction padded_extension(const GridFunction& f_on_k, const SampleMask& k,
                              double m, ExtendSign sign, const PadSpec& spec) {
  const GridDomain& dom = f_on_k.domain();
  const double fill = sign == ExtendSign::plus ? m : -m;
  std::vector<double> out(spec.padded.node_count(), fill);
  const int n = dom.dim();
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    if (!k.is_member(i)) continue;
    auto idx = dom.unflatten(i);
    for (int a = 0; a < n; ++a) idx[a] += spec.off[a];
    out[spec.padded.flatten(std::span<const std::int64_t>(idx.data(), n))] =
        f_on_k[i];
  }
  return GridFunction(spec.padded, std::move(out));
}

GridFunction crop(const GridFunction& g, const GridDomain& target,
                  const PadSpec& spec) {
  const int n = target.dim();
  std::vector<double> out(target.node_count());
  for (std::int64_t i = 0; i < target.node_count(); ++i) {
    auto idx = target.unflatten(i);
    for (int a = 0; a < n; ++a) idx[a] += spec.off[a];
    out[i] =
        g[spec.padded.flatten(std::span<const std::int64_t>(idx.data(), n))];
  }
  return GridFunction(target, std::move(out));
}

void check_finite_m(const GridFunction& f_on_k, const SampleMask& k,
                    const TransformParams& params) {
  params.validate();
  require(!params.m_infinite, ErrorCode::bad_params,
          "the infinite-M regime is handled by the oracle on sample sets");
  require(f_on_k.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  require(params.m > bound_a0(f_on_k, k), ErrorCode::m_too_small,
          "M must exceed max |f| on K");
}

/// Blend between the one-sided approximations from the nearer endpoint, so
/// the result cannot leave the interval they span.
GridFunction blend(const GridFunction& lower, const GridFunction& upper,
                   double s) {
  std::vector<double> out(lower.values().size());
  const std::vector<double>& l = lower.values();
  const std::vector<double>& u = upper.values();
  if (s >= 0.5) {
    const double w = 1.0 - s;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = l[i] + w * (u[i] - l[i]);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + s * (l[i] - u[i]);
  }
  return GridFunction(lower.domain(), std::move(out));
}

}  // namespace

GridFunction upper_approx(const GridFunction& f_on_k, const SampleMask& k,
                          const TransformParams& params) {
  check_finite_m(f_on_k, k, params);
  const PadSpec spec =
      make_pad(f_on_k.domain(), locality_radius(params.m, params.lambda));
  const GridFunction ext =
      padded_extension(f_on_k, k, params.m, ExtendSign::minus, spec);
  return crop(upper_transform(ext, params.lambda), f_on_k.domain(), spec);
}

GridFunction lower_approx(const GridFunction& f_on_k, const SampleMask& k,
                          const TransformParams& params) {
  check_finite_m(f_on_k, k, params);
  const PadSpec spec =
      make_pad(f_on_k.domain(), locality_radius(params.m, params.lambda));
  const GridFunction ext =
      padded_extension(f_on_k, k, params.m, ExtendSign::plus, spec);
  return crop(lower_transform(ext, params.lambda), f_on_k.domain(), spec);
}

GridFunction average_approx(const GridFunction& f_on_k, const SampleMask& k,
                            const TransformParams& params) {
  TransformParams p = params;
  p.s = 0.5;
  return weighted_average_approx(f_on_k, k, p);
}

GridFunction weighted_average_approx(const GridFunction& f_on_k,
                                     const SampleMask& k,
                                     const TransformParams& params) {
  check_finite_m(f_on_k, k, params);
  if (params.s == 1.0) return lower_approx(f_on_k, k, params);
  if (params.s == 0.0) return upper_approx(f_on_k, k, params);
  return blend(lower_approx(f_on_k, k, params), upper_approx(f_on_k, k, params),
               params.s);
}

GridFunction mixed_average_approx(const GridFunction& f_on_k,
                                  const SampleMask& k,
                                  const TransformParams& params) {
  check_finite_m(f_on_k, k, params);
  require(params.tau.has_value(), ErrorCode::bad_params,
          "the mixed average approximation needs tau");
  const double tau = *params.tau;
  const double margin = locality_radius(params.m, params.lambda) +
                        locality_radius(params.m, tau);
  const PadSpec spec = make_pad(f_on_k.domain(), margin);
  const GridFunction ext_plus =
      padded_extension(f_on_k, k, params.m, ExtendSign::plus, spec);
  const GridFunction ext_minus =
      padded_extension(f_on_k, k, params.m, ExtendSign::minus, spec);
  const GridFunction smooth_lower = crop(
      mixed_transform(ext_plus, params.lambda, tau, MixedKind::upper_of_lower),
      f_on_k.domain(), spec);
  const GridFunction smooth_upper = crop(
      mixed_transform(ext_minus, params.lambda, tau, MixedKind::lower_of_upper),
      f_on_k.domain(), spec);
  return blend(smooth_lower, smooth_upper, 0.5);
}

MultivaluedBounds multivalued_bounds(const ScatteredSamples& x) {
  const int dim = x.dim();
  std::map<std::vector<double>, std::pair<double, double>> agg;
  std::vector<std::vector<double>> order;
  for (std::int64_t i = 0; i < x.count(); ++i) {
    std::vector<double> key(x.point(i).begin(), x.point(i).end());
    auto [it, inserted] = agg.try_emplace(key, x.values()[i], x.values()[i]);
    if (inserted) {
      order.push_back(key);
    } else {
      it->second.first = std::min(it->second.first, x.values()[i]);
      it->second.second = std::max(it->second.second, x.values()[i]);
    }
  }
  std::vector<double> pts;
  std::vector<double> lo, hi;
  for (const auto& key : order) {
    pts.insert(pts.end(), key.begin(), key.end());
    const auto& mm = agg.at(key);
    lo.push_back(mm.first);
    hi.push_back(mm.second);
  }
  return {ScatteredSamples(dim, pts, std::move(lo)),
          ScatteredSamples(dim, std::move(pts), std::move(hi))};
}

RingExtensionResult ring_extension(const GridFunction& f_on_k,
                                   const SampleMask& k, double r_ball,
                                   double c0,
                                   const std::optional<TransformParams>&
                                       params) {
  require(f_on_k.domain() == k.domain(), ErrorCode::domain_mismatch,
          "function and mask domains differ");
  require(std::isfinite(r_ball) && r_ball > 0.0, ErrorCode::bad_params,
          "ring radius must be positive");
  require(std::isfinite(c0), ErrorCode::bad_params,
          "far-field constant must be finite");
  const GridDomain& dom = f_on_k.domain();
  const int n = dom.dim();

  std::array<double, kMaxDim> center{0.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) {
    center[a] = dom.origin(a) +
                0.5 * dom.spacing(a) * static_cast<double>(dom.extent(a) - 1);
  }
  auto dist_center = [&](std::int64_t i) {
    const auto x = dom.node_coords(i);
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = x[a] - center[a];
      d2 += d * d;
    }
    return std::sqrt(d2);
  };

  double r_k = 0.0;
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    if (k.is_member(i)) r_k = std::max(r_k, dist_center(i));
  }
  require(r_k < r_ball, ErrorCode::bad_params,
          "K must fit strictly inside the ring radius");

  double margin = 0.0;
  if (params) {
    params->validate();
    require(!params->m_infinite, ErrorCode::bad_params,
            "ring extension needs a finite M");
    margin = locality_radius(params->m, params->lambda);
    if (params->tau) margin += locality_radius(params->m, *params->tau);
  }
  for (int a = 0; a < n; ++a) {
    const double half_extent =
        0.5 * dom.spacing(a) * static_cast<double>(dom.extent(a) - 1);
    require(half_extent >= r_ball + margin, ErrorCode::size_guard,
            "grid too small to contain the ring plus the locality margin");
  }

  std::vector<double> values(f_on_k.values());
  std::vector<std::uint8_t> member(k.member());
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    if (dist_center(i) >= r_ball) {
      values[i] = c0;
      member[i] = 1;
    }
  }
  return {GridFunction(dom, std::move(values)),
          SampleMask(dom, std::move(member))};
}

InterpolationReport interpolation_check(const GridFunction& approx,
                                        const GridFunction& f_on_k,
                                        const SampleMask& k, double tol) {
  require(approx.domain() == f_on_k.domain() && approx.domain() == k.domain(),
          ErrorCode::domain_mismatch, "shared domain required");
  InterpolationReport report;
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (!k.is_member(i)) continue;
    const double dev = std::abs(approx[i] - f_on_k[i]);
    if (dev > report.max_abs_dev || report.worst_node < 0) {
      report.max_abs_dev = dev;
      report.worst_node = i;
    }
  }
  report.pass = report.max_abs_dev <= tol;
  return report;
}

RasterizedSamples rasterize_samples(const ScatteredSamples& x,
                                    const GridDomain& domain) {
  require(x.dim() == domain.dim(), ErrorCode::domain_mismatch,
          "sample dimension does not match the grid");
  const int n = domain.dim();
  std::vector<double> lo(domain.node_count(), 0.0);
  std::vector<double> hi(domain.node_count(), 0.0);
  std::vector<std::uint8_t> member(domain.node_count(), 0);
  for (std::int64_t i = 0; i < x.count(); ++i) {
    std::array<std::int64_t, kMaxDim> idx{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      const double pos = (x.point(i)[a] - domain.origin(a)) / domain.spacing(a);
      const std::int64_t j = std::llround(pos);
      require(j >= 0 && j < domain.extent(a), ErrorCode::invalid_argument,
              "sample point falls outside the grid window");
      idx[a] = j;
    }
    const std::int64_t flat =
        domain.flatten(std::span<const std::int64_t>(idx.data(), n));
    const double v = x.values()[i];
    if (!member[flat]) {
      member[flat] = 1;
      lo[flat] = v;
      hi[flat] = v;
    } else {
      lo[flat] = std::min(lo[flat], v);
      hi[flat] = std::max(hi[flat], v);
    }
  }
  return {GridFunction(domain, std::move(lo)),
          GridFunction(domain, std::move(hi)),
          SampleMask(domain, std::move(member))};
}

}  // namespace ccx
