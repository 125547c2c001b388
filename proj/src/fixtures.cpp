#include "ccx/fixtures.hpp"

#include <cmath>
#include <cstring>

namespace ccx {

namespace {

double norm_of(std::span<const double> x) {
  double d2 = 0.0;
  for (double v : x) d2 += v * v;
  return std::sqrt(d2);
}

// Saturating C^{1,1} radial profile: t^2 up to 1, quadratic blend on [1,2],
// constant 2 beyond. |q'| <= 2 and |q''| <= 2 throughout.
double ring_profile(double t) {
  if (t <= 1.0) return t * t;
  if (t >= 2.0) return 2.0;
  const double u = t - 1.0;
  return 1.0 + 2.0 * u - u * u;
}

}  // namespace

Fixture fixture_from_name(std::string_view name) {
  if (name == "one") return Fixture::one;
  if (name == "abs") return Fixture::abs_norm;
  if (name == "quad") return Fixture::quad;
  if (name == "uc") return Fixture::uc_sqrt;
  if (name == "sinpos") return Fixture::sin_pos;
  if (name == "abs-ring") return Fixture::abs_ring;
  if (name == "quad-ring") return Fixture::quad_ring;
  if (name == "uc-ring") return Fixture::uc_ring;
  fail(ErrorCode::unknown_fixture,
       "unknown fixture: " + std::string(name));
}

const char* fixture_name(Fixture f) {
  switch (f) {
    case Fixture::one: return "one";
    case Fixture::abs_norm: return "abs";
    case Fixture::quad: return "quad";
    case Fixture::uc_sqrt: return "uc";
    case Fixture::sin_pos: return "sinpos";
    case Fixture::abs_ring: return "abs-ring";
    case Fixture::quad_ring: return "quad-ring";
    case Fixture::uc_ring: return "uc-ring";
  }
  return "?";
}

double fixture_eval(Fixture f, std::span<const double> x) {
  switch (f) {
    case Fixture::one:
      return 1.0;
    case Fixture::abs_norm:
      return norm_of(x);
    case Fixture::quad:
      return norm_of(x) * norm_of(x);
    case Fixture::uc_sqrt:
      return std::sqrt(norm_of(x));
    case Fixture::sin_pos: {
      double s = 0.0;
      for (double v : x) s += v;
      return 1.0 + 0.5 * std::sin(s);
    }
    case Fixture::abs_ring:
      return std::min(norm_of(x), 1.0);
    case Fixture::quad_ring:
      return ring_profile(norm_of(x));
    case Fixture::uc_ring:
      return std::min(std::sqrt(norm_of(x)), 1.0);
  }
  fail(ErrorCode::internal, "unreachable fixture");
}

FixtureInfo fixture_info(Fixture f) {
  FixtureInfo info;
  switch (f) {
    case Fixture::one:
      info.has_lip = true;
      info.lip = 0.0;
      info.has_modulus = true;
      info.mod_a = 0.0;
      info.mod_b = 0.0;
      info.has_far_const = true;
      info.far_const = 1.0;
      info.far_radius = 0.0;
      break;
    case Fixture::abs_norm:
      info.has_lip = true;
      info.lip = 1.0;
      info.has_modulus = true;
      info.mod_a = 1.0;
      info.mod_b = 0.0;
      break;
    case Fixture::quad:
      info.has_grad_lip = true;
      info.grad_lip = 2.0;
      break;
    case Fixture::uc_sqrt:
      info.has_modulus = true;
      // sqrt(t) <= t/2 + 1/2 with equality at t = 1.
      info.mod_a = 0.5;
      info.mod_b = 0.5;
      break;
    case Fixture::sin_pos:
      info.has_modulus = true;
      info.mod_a = 0.5 * std::sqrt(3.0);  // covers dimensions up to 3
      info.mod_b = 0.0;
      break;
    case Fixture::abs_ring:
      info.has_lip = true;
      info.lip = 1.0;
      info.has_modulus = true;
      info.mod_a = 1.0;
      info.mod_b = 0.0;
      info.has_far_const = true;
      info.far_const = 1.0;
      info.far_radius = 1.0;
      break;
    case Fixture::quad_ring:
      info.has_lip = true;
      info.lip = 2.0;
      info.has_grad_lip = true;
      info.grad_lip = 2.0;
      info.has_modulus = true;
      info.mod_a = 2.0;
      info.mod_b = 0.0;
      info.has_far_const = true;
      info.far_const = 2.0;
      info.far_radius = 2.0;
      break;
    case Fixture::uc_ring:
      info.has_modulus = true;
      info.mod_a = 0.5;
      info.mod_b = 0.5;
      info.has_far_const = true;
      info.far_const = 1.0;
      info.far_radius = 1.0;
      break;
  }
  return info;
}

double fixture_omega(Fixture f, double t) {
  if (t <= 0.0) return 0.0;
  switch (f) {
    case Fixture::one:
      return 0.0;
    case Fixture::abs_norm:
      return t;
    case Fixture::uc_sqrt:
      return std::sqrt(t);
    case Fixture::sin_pos:
      // Lipschitz majorant saturating at the oscillation of f.
      return std::min(0.5 * std::sqrt(3.0) * t, 1.0);
    case Fixture::abs_ring:
      return std::min(t, 1.0);
    case Fixture::quad_ring:
      return std::min(2.0 * t, 2.0);
    case Fixture::uc_ring:
      return std::min(std::sqrt(t), 1.0);
    case Fixture::quad:
      break;
  }
  fail(ErrorCode::bad_params,
       "fixture has no global modulus of continuity");
}

double fixture_sqrt_omega_slope(Fixture f, int dim) {
  // |sqrt(f(x)) - sqrt(f(y))| <= L_f |x-y| / (2 sqrt(min f)).
  switch (f) {
    case Fixture::one:
      return 0.0;
    case Fixture::sin_pos: {
      const double min_f = 0.5;
      const double lip = 0.5 * std::sqrt(static_cast<double>(dim));
      return lip / (2.0 * std::sqrt(min_f));
    }
    default:
      break;
  }
  fail(ErrorCode::bad_params,
       "fixture is not strictly positive; no sqrt modulus");
}

GridFunction fixture_grid(Fixture f, const GridDomain& domain) {
  std::vector<double> values(domain.node_count());
  for (std::int64_t i = 0; i < domain.node_count(); ++i) {
    const auto x = domain.node_coords(i);
    values[i] =
        fixture_eval(f, std::span<const double>(x.data(), domain.dim()));
  }
  return GridFunction(domain, std::move(values));
}

GridFunction spike_grid(const GridDomain& domain, double alpha) {
  require(std::isfinite(alpha), ErrorCode::bad_params,
          "spike height must be finite");
  std::vector<double> values(domain.node_count(), 0.0);
  std::array<std::int64_t, kMaxDim> idx{0, 0, 0};
  for (int a = 0; a < domain.dim(); ++a) idx[a] = domain.extent(a) / 2;
  values[domain.flatten(
      std::span<const std::int64_t>(idx.data(), domain.dim()))] = alpha;
  return GridFunction(domain, std::move(values));
}

ScatteredSamples two_point_samples() {
  return ScatteredSamples(1, {0.0, 1.0}, {0.0, 1.0});
}

SampleMask box_corners_mask(const GridDomain& domain, double cloud_extent) {
  require(domain.dim() == 2, ErrorCode::invalid_argument,
          "box-corner mask is two-dimensional");
  require(cloud_extent > 0.0 && cloud_extent < 1.0, ErrorCode::bad_params,
          "cloud extent must lie in (0,1)");
  std::vector<std::uint8_t> member(domain.node_count(), 0);
  bool corner_seen = false;
  for (std::int64_t i = 0; i < domain.node_count(); ++i) {
    const auto x = domain.node_coords(i);
    if (std::abs(x[0]) <= cloud_extent && std::abs(x[1]) <= cloud_extent) {
      member[i] = 1;
    }
    if (std::abs(std::abs(x[0]) - 1.0) < 1e-12 &&
        std::abs(std::abs(x[1]) - 1.0) < 1e-12) {
      member[i] = 1;
      corner_seen = true;
    }
  }
  require(corner_seen, ErrorCode::invalid_argument,
          "domain does not contain the box corners (+-1, +-1)");
  return SampleMask(domain, std::move(member));
}

}  // namespace ccx
