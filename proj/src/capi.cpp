#include "ccx/capi.h"

#include <cstring>
#include <string>

#include "ccx/approx.hpp"
#include "ccx/fixtures.hpp"
#include "ccx/geometry.hpp"
#include "ccx/grid_io.hpp"
#include "ccx/lp.hpp"
#include "ccx/moduli.hpp"
#include "ccx/oracle.hpp"
#include "ccx/transforms.hpp"

struct ccx_grid {
  ccx::GridFunction g;
};
struct ccx_mask {
  ccx::SampleMask m;
};
struct ccx_samples {
  ccx::ScatteredSamples s;
};
struct ccx_modulus {
  ccx::ModulusModel m;
};

namespace {

thread_local std::string t_last_error;

ccx_status to_status(ccx::ErrorCode code) {
  using ccx::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return CCX_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain_mismatch: return CCX_ERR_DOMAIN_MISMATCH;
    case ErrorCode::empty_mask: return CCX_ERR_EMPTY_MASK;
    case ErrorCode::bad_params: return CCX_ERR_BAD_PARAMS;
    case ErrorCode::m_too_small: return CCX_ERR_M_TOO_SMALL;
    case ErrorCode::not_in_hull: return CCX_ERR_NOT_IN_HULL;
    case ErrorCode::size_guard: return CCX_ERR_SIZE_GUARD;
    case ErrorCode::io: return CCX_ERR_IO;
    case ErrorCode::format: return CCX_ERR_FORMAT;
    case ErrorCode::unknown_fixture: return CCX_ERR_UNKNOWN_FIXTURE;
    case ErrorCode::internal: return CCX_ERR_INTERNAL;
  }
  return CCX_ERR_INTERNAL;
}

template <typename Fn>
ccx_status guarded(Fn&& fn) {
  try {
    fn();
    return CCX_OK;
  } catch (const ccx::Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CCX_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return CCX_ERR_INTERNAL;
  }
}

void check_ptr(const void* p, const char* what) {
  ccx::require(p != nullptr, ccx::ErrorCode::invalid_argument,
               std::string("null ") + what);
}

ccx::GridDomain make_domain(int dim, const int64_t* shape,
                            const double* spacing, const double* origin) {
  check_ptr(shape, "shape");
  check_ptr(spacing, "spacing");
  check_ptr(origin, "origin");
  ccx::require(dim >= 1 && dim <= ccx::kMaxDim,
               ccx::ErrorCode::invalid_argument, "dimension must be in [1,3]");
  return ccx::GridDomain(
      dim, std::span<const std::int64_t>(shape, dim),
      std::span<const double>(spacing, dim), std::span<const double>(origin, dim));
}

std::optional<ccx::Window> make_window(const ccx::GridDomain& dom,
                                       double radius) {
  if (radius < 0.0) return {};
  return ccx::Window::from_physical_radius(dom, radius);
}

std::span<const double> point_span(const ccx::GridDomain& dom,
                                   const double* x) {
  check_ptr(x, "point");
  return std::span<const double>(x, dom.dim());
}

ccx::TransformParams make_params(double lambda, double m, double s = 0.5,
                                 double tau = 0.0) {
  ccx::TransformParams p;
  p.lambda = lambda;
  p.m = m;
  p.s = s;
  if (tau > 0.0) p.tau = tau;
  return p;
}

}  // namespace

extern "C" {

const char* ccx_status_name(ccx_status status) {
  switch (status) {
    case CCX_OK: return "ok";
    case CCX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CCX_ERR_DOMAIN_MISMATCH: return "domain mismatch";
    case CCX_ERR_EMPTY_MASK: return "empty mask";
    case CCX_ERR_BAD_PARAMS: return "bad parameters";
    case CCX_ERR_M_TOO_SMALL: return "M too small";
    case CCX_ERR_NOT_IN_HULL: return "not in convex hull";
    case CCX_ERR_SIZE_GUARD: return "size guard exceeded";
    case CCX_ERR_IO: return "i/o failure";
    case CCX_ERR_FORMAT: return "malformed file";
    case CCX_ERR_UNKNOWN_FIXTURE: return "unknown fixture";
    case CCX_ERR_INTERNAL: return "internal failure";
  }
  return "?";
}

const char* ccx_last_error(void) { return t_last_error.c_str(); }

const char* ccx_version(void) { return "1.0.0"; }

/* ---- grids ---------------------------------------------------------- */

ccx_status ccx_grid_create(int dim, const int64_t* shape,
                           const double* spacing, const double* origin,
                           const double* values, ccx_grid** out) {
  return guarded([&] {
    check_ptr(values, "values");
    check_ptr(out, "out");
    ccx::GridDomain dom = make_domain(dim, shape, spacing, origin);
    std::vector<double> v(values, values + dom.node_count());
    *out = new ccx_grid{ccx::GridFunction(std::move(dom), std::move(v))};
  });
}

void ccx_grid_destroy(ccx_grid* g) { delete g; }

ccx_status ccx_grid_clone(const ccx_grid* g, ccx_grid** out) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{g->g};
  });
}

int ccx_grid_dim(const ccx_grid* g) { return g ? g->g.domain().dim() : 0; }

int64_t ccx_grid_node_count(const ccx_grid* g) {
  return g ? g->g.domain().node_count() : 0;
}

ccx_status ccx_grid_shape(const ccx_grid* g, int64_t* shape) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(shape, "shape");
    for (int k = 0; k < g->g.domain().dim(); ++k)
      shape[k] = g->g.domain().extent(k);
  });
}

ccx_status ccx_grid_spacing(const ccx_grid* g, double* spacing) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(spacing, "spacing");
    for (int k = 0; k < g->g.domain().dim(); ++k)
      spacing[k] = g->g.domain().spacing(k);
  });
}

ccx_status ccx_grid_origin(const ccx_grid* g, double* origin) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(origin, "origin");
    for (int k = 0; k < g->g.domain().dim(); ++k)
      origin[k] = g->g.domain().origin(k);
  });
}

const double* ccx_grid_values(const ccx_grid* g) {
  return g ? g->g.values().data() : nullptr;
}

ccx_status ccx_grid_node_coords(const ccx_grid* g, int64_t flat, double* x) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(x, "coords");
    ccx::require(flat >= 0 && flat < g->g.domain().node_count(),
                 ccx::ErrorCode::invalid_argument, "flat index out of range");
    const auto c = g->g.domain().node_coords(flat);
    for (int k = 0; k < g->g.domain().dim(); ++k) x[k] = c[k];
  });
}

ccx_status ccx_grid_read(const char* path, ccx_grid** out) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::read_grid(path)};
  });
}

ccx_status ccx_grid_write(const ccx_grid* g, const char* path) {
  return guarded([&] {
    check_ptr(g, "grid");
    check_ptr(path, "path");
    ccx::write_grid(g->g, path);
  });
}

/* ---- masks ----------------------------------------------------------- */

ccx_status ccx_mask_create(int dim, const int64_t* shape,
                           const double* spacing, const double* origin,
                           const uint8_t* member, ccx_mask** out) {
  return guarded([&] {
    check_ptr(member, "member");
    check_ptr(out, "out");
    ccx::GridDomain dom = make_domain(dim, shape, spacing, origin);
    std::vector<std::uint8_t> m(member, member + dom.node_count());
    *out = new ccx_mask{ccx::SampleMask(std::move(dom), std::move(m))};
  });
}

void ccx_mask_destroy(ccx_mask* m) { delete m; }

int ccx_mask_dim(const ccx_mask* m) { return m ? m->m.domain().dim() : 0; }

int64_t ccx_mask_member_count(const ccx_mask* m) {
  return m ? m->m.member_count() : 0;
}

ccx_status ccx_mask_shape(const ccx_mask* m, int64_t* shape) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(shape, "shape");
    for (int k = 0; k < m->m.domain().dim(); ++k)
      shape[k] = m->m.domain().extent(k);
  });
}

ccx_status ccx_mask_spacing(const ccx_mask* m, double* spacing) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(spacing, "spacing");
    for (int k = 0; k < m->m.domain().dim(); ++k)
      spacing[k] = m->m.domain().spacing(k);
  });
}

ccx_status ccx_mask_origin(const ccx_mask* m, double* origin) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(origin, "origin");
    for (int k = 0; k < m->m.domain().dim(); ++k)
      origin[k] = m->m.domain().origin(k);
  });
}

int64_t ccx_mask_node_count(const ccx_mask* m) {
  return m ? m->m.domain().node_count() : 0;
}

const uint8_t* ccx_mask_members(const ccx_mask* m) {
  return m ? m->m.member().data() : nullptr;
}

ccx_status ccx_mask_invert(const ccx_mask* m, ccx_mask** out) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(out, "out");
    *out = new ccx_mask{m->m.inverted()};
  });
}

ccx_status ccx_mask_diameter(const ccx_mask* m, double* out) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(out, "out");
    *out = m->m.diameter();
  });
}

ccx_status ccx_mask_read(const char* path, ccx_mask** out) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new ccx_mask{ccx::read_mask(path)};
  });
}

ccx_status ccx_mask_write(const ccx_mask* m, const char* path) {
  return guarded([&] {
    check_ptr(m, "mask");
    check_ptr(path, "path");
    ccx::write_mask(m->m, path);
  });
}

/* ---- scattered samples ---------------------------------------------- */

ccx_status ccx_samples_create(int dim, int64_t count, const double* points,
                              const double* values, ccx_samples** out) {
  return guarded([&] {
    check_ptr(points, "points");
    check_ptr(values, "values");
    check_ptr(out, "out");
    ccx::require(count >= 1, ccx::ErrorCode::invalid_argument,
                 "sample count must be positive");
    std::vector<double> p(points, points + count * dim);
    std::vector<double> v(values, values + count);
    *out = new ccx_samples{
        ccx::ScatteredSamples(dim, std::move(p), std::move(v))};
  });
}

void ccx_samples_destroy(ccx_samples* s) { delete s; }

int ccx_samples_dim(const ccx_samples* s) { return s ? s->s.dim() : 0; }

int64_t ccx_samples_count(const ccx_samples* s) {
  return s ? s->s.count() : 0;
}

const double* ccx_samples_points(const ccx_samples* s) {
  return s ? s->s.points().data() : nullptr;
}

const double* ccx_samples_values(const ccx_samples* s) {
  return s ? s->s.values().data() : nullptr;
}

ccx_status ccx_samples_read_csv(const char* path, ccx_samples** out) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new ccx_samples{ccx::read_samples_csv(path)};
  });
}

ccx_status ccx_samples_write_csv(const ccx_samples* s, const char* path) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(path, "path");
    ccx::write_samples_csv(s->s, path);
  });
}

ccx_status ccx_samples_bounds(const ccx_samples* s, ccx_samples** lower,
                              ccx_samples** upper) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(lower, "lower");
    check_ptr(upper, "upper");
    ccx::MultivaluedBounds b = ccx::multivalued_bounds(s->s);
    *lower = new ccx_samples{std::move(b.lower)};
    *upper = new ccx_samples{std::move(b.upper)};
  });
}

ccx_status ccx_samples_rasterize(const ccx_samples* s, int dim,
                                 const int64_t* shape, const double* spacing,
                                 const double* origin, ccx_grid** lower,
                                 ccx_grid** upper, ccx_mask** mask) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(lower, "lower");
    check_ptr(upper, "upper");
    check_ptr(mask, "mask");
    ccx::GridDomain dom = make_domain(dim, shape, spacing, origin);
    ccx::RasterizedSamples r = ccx::rasterize_samples(s->s, dom);
    *lower = new ccx_grid{std::move(r.lower)};
    *upper = new ccx_grid{std::move(r.upper)};
    *mask = new ccx_mask{std::move(r.mask)};
  });
}

/* ---- sample extension and parameter thresholds ----------------------- */

ccx_status ccx_extend_with_constant(const ccx_grid* f, const ccx_mask* k,
                                    double m, int sign, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    const ccx::ExtendSign s =
        sign >= 0 ? ccx::ExtendSign::plus : ccx::ExtendSign::minus;
    *out = new ccx_grid{ccx::extend_with_constant(f->g, k->m, m, s)};
  });
}

ccx_status ccx_min_safe_m(double a0, double lambda, double d, double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::min_safe_m(a0, lambda, d);
  });
}

ccx_status ccx_bound_a0(const ccx_grid* f, const ccx_mask* k, double* out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = ccx::bound_a0(f->g, k->m);
  });
}

ccx_status ccx_median_shift(const ccx_grid* f, const ccx_mask* k,
                            ccx_grid** shifted, double* shift) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(shifted, "shifted");
    check_ptr(shift, "shift");
    ccx::MedianShiftResult r = ccx::median_shift(f->g, k->m);
    *shifted = new ccx_grid{std::move(r.shifted)};
    *shift = r.shift;
  });
}

/* ---- Moreau envelopes and transforms --------------------------------- */

ccx_status ccx_locality_radius(double m, double lambda, double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::locality_radius(m, lambda);
  });
}

ccx_status ccx_lower_moreau(const ccx_grid* f, double lambda,
                            double window_radius, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::lower_moreau(
        f->g, lambda, make_window(f->g.domain(), window_radius))};
  });
}

ccx_status ccx_upper_moreau(const ccx_grid* f, double lambda,
                            double window_radius, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::upper_moreau(
        f->g, lambda, make_window(f->g.domain(), window_radius))};
  });
}

ccx_status ccx_lower_transform(const ccx_grid* f, double lambda,
                               double window_radius, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::lower_transform(
        f->g, lambda, make_window(f->g.domain(), window_radius))};
  });
}

ccx_status ccx_upper_transform(const ccx_grid* f, double lambda,
                               double window_radius, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::upper_transform(
        f->g, lambda, make_window(f->g.domain(), window_radius))};
  });
}

ccx_status ccx_mixed_transform(const ccx_grid* f, double lambda, double tau,
                               int kind, double window_radius,
                               ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    ccx::require(kind == 0 || kind == 1, ccx::ErrorCode::invalid_argument,
                 "mixed kind must be 0 (upper-of-lower) or 1 (lower-of-upper)");
    const ccx::MixedKind mk =
        kind == 0 ? ccx::MixedKind::upper_of_lower : ccx::MixedKind::lower_of_upper;
    *out = new ccx_grid{ccx::mixed_transform(
        f->g, lambda, tau, mk, make_window(f->g.domain(), window_radius))};
  });
}

/* ---- approximations --------------------------------------------------- */

ccx_status ccx_upper_approx(const ccx_grid* f, const ccx_mask* k,
                            double lambda, double m, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::upper_approx(f->g, k->m, make_params(lambda, m))};
  });
}

ccx_status ccx_lower_approx(const ccx_grid* f, const ccx_mask* k,
                            double lambda, double m, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::lower_approx(f->g, k->m, make_params(lambda, m))};
  });
}

ccx_status ccx_average_approx(const ccx_grid* f, const ccx_mask* k,
                              double lambda, double m, ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out =
        new ccx_grid{ccx::average_approx(f->g, k->m, make_params(lambda, m))};
  });
}

ccx_status ccx_weighted_average_approx(const ccx_grid* f, const ccx_mask* k,
                                       double lambda, double m, double s,
                                       ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = new ccx_grid{
        ccx::weighted_average_approx(f->g, k->m, make_params(lambda, m, s))};
  });
}

ccx_status ccx_mixed_average_approx(const ccx_grid* f, const ccx_mask* k,
                                    double lambda, double tau, double m,
                                    ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::mixed_average_approx(
        f->g, k->m, make_params(lambda, m, 0.5, tau))};
  });
}

ccx_status ccx_ring_extension(const ccx_grid* f, const ccx_mask* k,
                              double r_ball, double c0, double lambda,
                              double m, double tau, ccx_grid** f_out,
                              ccx_mask** mask_out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(f_out, "f_out");
    check_ptr(mask_out, "mask_out");
    std::optional<ccx::TransformParams> params;
    if (lambda > 0.0 && m > 0.0) params = make_params(lambda, m, 0.5, tau);
    ccx::RingExtensionResult r =
        ccx::ring_extension(f->g, k->m, r_ball, c0, params);
    *f_out = new ccx_grid{std::move(r.f)};
    *mask_out = new ccx_mask{std::move(r.mask)};
  });
}

ccx_status ccx_interpolation_check(const ccx_grid* approx, const ccx_grid* f,
                                   const ccx_mask* k, double tol,
                                   double* max_abs_dev, int64_t* worst_node,
                                   int* pass) {
  return guarded([&] {
    check_ptr(approx, "approx");
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    const ccx::InterpolationReport r =
        ccx::interpolation_check(approx->g, f->g, k->m, tol);
    if (max_abs_dev) *max_abs_dev = r.max_abs_dev;
    if (worst_node) *worst_node = r.worst_node;
    if (pass) *pass = r.pass ? 1 : 0;
  });
}

ccx_status ccx_pad_clamp(const ccx_grid* f, const ccx_mask* k, int64_t nodes,
                         ccx_grid** f_out, ccx_mask** mask_out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(k, "mask");
    check_ptr(f_out, "f_out");
    check_ptr(mask_out, "mask_out");
    ccx::require(f->g.domain() == k->m.domain(),
                 ccx::ErrorCode::domain_mismatch,
                 "function and mask domains differ");
    ccx::require(nodes >= 0, ccx::ErrorCode::invalid_argument,
                 "pad must be nonnegative");
    const ccx::GridDomain& dom = f->g.domain();
    const int n = dom.dim();
    std::array<std::int64_t, ccx::kMaxDim> shape{1, 1, 1};
    std::array<double, ccx::kMaxDim> spacing{1.0, 1.0, 1.0};
    std::array<double, ccx::kMaxDim> origin{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
      shape[a] = dom.extent(a) + 2 * nodes;
      spacing[a] = dom.spacing(a);
      origin[a] = dom.origin(a) - dom.spacing(a) * static_cast<double>(nodes);
    }
    ccx::GridDomain padded(
        n, std::span<const std::int64_t>(shape.data(), n),
        std::span<const double>(spacing.data(), n),
        std::span<const double>(origin.data(), n));
    std::vector<double> values(padded.node_count());
    std::vector<std::uint8_t> member(padded.node_count());
    for (std::int64_t i = 0; i < padded.node_count(); ++i) {
      auto idx = padded.unflatten(i);
      std::array<std::int64_t, ccx::kMaxDim> src{0, 0, 0};
      for (int a = 0; a < n; ++a) {
        src[a] = std::clamp<std::int64_t>(idx[a] - nodes, 0,
                                          dom.extent(a) - 1);
      }
      const std::int64_t flat =
          dom.flatten(std::span<const std::int64_t>(src.data(), n));
      values[i] = f->g[flat];
      member[i] = k->m.is_member(flat) ? 1 : 0;
    }
    *f_out = new ccx_grid{ccx::GridFunction(padded, std::move(values))};
    *mask_out = new ccx_mask{ccx::SampleMask(padded, std::move(member))};
  });
}

/* ---- geometry --------------------------------------------------------- */

ccx_status ccx_hausdorff_distance(const ccx_mask* k, const ccx_mask* e,
                                  double* out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(e, "mask");
    check_ptr(out, "out");
    *out = ccx::hausdorff_distance(k->m, e->m);
  });
}

ccx_status ccx_density_radius_field(const ccx_mask* k, ccx_grid** out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(out, "out");
    ccx::RadiusField f = ccx::density_radius(k->m);
    *out = new ccx_grid{ccx::GridFunction(f.domain, std::move(f.r))};
  });
}

ccx_status ccx_co_membership(const ccx_mask* k, const double* x, int* out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = ccx::co_membership(point_span(k->m.domain(), x), k->m) ? 1 : 0;
  });
}

ccx_status ccx_co_member_field(const ccx_mask* k, ccx_mask** out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = new ccx_mask{ccx::co_member_field(k->m)};
  });
}

ccx_status ccx_convex_density_radius(const ccx_mask* k, const double* x,
                                     double* out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(out, "out");
    *out = ccx::convex_density_radius(point_span(k->m.domain(), x), k->m);
  });
}

ccx_status ccx_convex_density_radius_points(int dim, int64_t count,
                                            const double* points,
                                            const double* x, double* out) {
  return guarded([&] {
    check_ptr(points, "points");
    check_ptr(x, "point");
    check_ptr(out, "out");
    ccx::require(count >= 1, ccx::ErrorCode::invalid_argument,
                 "point count must be positive");
    *out = ccx::convex_density_radius_points(
        dim, std::span<const double>(points, count * dim),
        std::span<const double>(x, dim));
  });
}

ccx_status ccx_co_membership_points(int dim, int64_t count,
                                    const double* points, const double* x,
                                    int* out) {
  return guarded([&] {
    check_ptr(points, "points");
    check_ptr(x, "point");
    check_ptr(out, "out");
    ccx::require(dim >= 1 && dim <= ccx::kMaxDim,
                 ccx::ErrorCode::invalid_argument, "dimension must be in [1,3]");
    ccx::require(count >= 1, ccx::ErrorCode::invalid_argument,
                 "point count must be positive");
    *out = ccx::in_convex_hull(
               dim, std::span<const double>(points, count * dim), x)
               ? 1
               : 0;
  });
}

ccx_status ccx_dist_like(const ccx_mask* k, const ccx_grid* f, double lambda,
                         const double* x, double* out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = ccx::dist_like(point_span(k->m.domain(), x), k->m, f->g, lambda);
  });
}

ccx_status ccx_big_d(const ccx_mask* k, const ccx_grid* f, double lambda,
                     const double* x, double* out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = ccx::big_d(point_span(k->m.domain(), x), k->m, f->g, lambda);
  });
}

ccx_status ccx_big_d_squared_field(const ccx_mask* k, const ccx_grid* f,
                                   double lambda, ccx_grid** out) {
  return guarded([&] {
    check_ptr(k, "mask");
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_grid{ccx::big_d_squared_field(k->m, f->g, lambda)};
  });
}

ccx_status ccx_stability_bound(double lambda, double m,
                               const ccx_modulus* omega, double d_h,
                               double* out) {
  return guarded([&] {
    check_ptr(omega, "modulus");
    check_ptr(out, "out");
    *out = ccx::stability_bound(lambda, m, omega->m, d_h);
  });
}

ccx_status ccx_stability_bound_lipschitz(double lambda, double m, double l,
                                         double alpha, double d_h,
                                         double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::stability_bound_lipschitz(lambda, m, l, alpha, d_h);
  });
}

/* ---- moduli ------------------------------------------------------------ */

ccx_status ccx_empirical_modulus(const ccx_grid* f, int64_t max_pairs,
                                 ccx_modulus** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    *out = new ccx_modulus{ccx::empirical_modulus(f->g, max_pairs)};
  });
}

ccx_status ccx_modulus_linear(double slope, ccx_modulus** out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = new ccx_modulus{ccx::ModulusModel::linear(slope)};
  });
}

void ccx_modulus_destroy(ccx_modulus* m) { delete m; }

ccx_status ccx_modulus_complete(ccx_modulus* m) {
  return guarded([&] {
    check_ptr(m, "modulus");
    ccx::least_concave_majorant(m->m);
    ccx::affine_bound(m->m);
  });
}

ccx_status ccx_modulus_affine(const ccx_modulus* m, double* a, double* b) {
  return guarded([&] {
    check_ptr(m, "modulus");
    ccx::require(m->m.affine_valid, ccx::ErrorCode::invalid_argument,
                 "modulus model is incomplete");
    if (a) *a = m->m.a;
    if (b) *b = m->m.b;
  });
}

ccx_status ccx_modulus_eval(const ccx_modulus* m, double t, double* out) {
  return guarded([&] {
    check_ptr(m, "modulus");
    check_ptr(out, "out");
    *out = m->m.eval_cav(t);
  });
}

ccx_status ccx_modulus_set_lipschitz(ccx_modulus* m, double lip) {
  return guarded([&] {
    check_ptr(m, "modulus");
    ccx::require(lip >= 0.0, ccx::ErrorCode::bad_params,
                 "Lipschitz constant must be nonnegative");
    m->m.lip = lip;
  });
}

ccx_status ccx_modulus_set_grad_lipschitz(ccx_modulus* m, double grad_lip) {
  return guarded([&] {
    check_ptr(m, "modulus");
    ccx::require(grad_lip >= 0.0, ccx::ErrorCode::bad_params,
                 "gradient-Lipschitz constant must be nonnegative");
    m->m.grad_lip = grad_lip;
  });
}

ccx_status ccx_modulus_read_csv(const char* path, ccx_modulus** out) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new ccx_modulus{ccx::read_modulus_csv(path)};
  });
}

ccx_status ccx_modulus_write_csv(const ccx_modulus* m, const char* path) {
  return guarded([&] {
    check_ptr(m, "modulus");
    check_ptr(path, "path");
    ccx::write_modulus_csv(m->m, path);
  });
}

ccx_status ccx_error_bound_uc(double r_c, double lambda, const ccx_modulus* m,
                              double* out) {
  return guarded([&] {
    check_ptr(m, "modulus");
    check_ptr(out, "out");
    *out = ccx::error_bound_uc(r_c, lambda, m->m);
  });
}

ccx_status ccx_error_bound_lip(double r_c, double lambda, double l,
                               double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::error_bound_lip(r_c, lambda, l);
  });
}

ccx_status ccx_error_bound_c11(double r_c, double lambda, double l,
                               double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::error_bound_c11(r_c, lambda, l);
  });
}

/* ---- oracle ------------------------------------------------------------ */

ccx_status ccx_convex_envelope_value(int dim, int64_t count,
                                     const double* points,
                                     const double* values, const double* x0,
                                     double* value, int32_t* support,
                                     double* weights,
                                     int32_t* support_count) {
  return guarded([&] {
    check_ptr(points, "points");
    check_ptr(values, "values");
    check_ptr(x0, "x0");
    check_ptr(value, "value");
    const ccx::oracle::CaratheodoryCertificate cert =
        ccx::oracle::convex_envelope_value(
            dim, std::span<const double>(points, count * dim),
            std::span<const double>(values, count), x0);
    *value = cert.value;
    if (support_count) {
      *support_count = static_cast<int32_t>(cert.support.size());
    }
    for (std::size_t i = 0; i < cert.support.size(); ++i) {
      if (support) support[i] = cert.support[i];
      if (weights) weights[i] = cert.weights[i];
    }
  });
}

ccx_status ccx_lower_transform_exact(const ccx_samples* s, const double* x0,
                                     double lambda, double* out) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(x0, "x0");
    check_ptr(out, "out");
    *out = ccx::oracle::lower_transform_exact(s->s, x0, lambda);
  });
}

ccx_status ccx_upper_transform_exact(const ccx_samples* s, const double* x0,
                                     double lambda, double* out) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(x0, "x0");
    check_ptr(out, "out");
    *out = ccx::oracle::upper_transform_exact(s->s, x0, lambda);
  });
}

ccx_status ccx_average_approx_exact(const ccx_samples* s, const double* x0,
                                    double lambda, double* out) {
  return guarded([&] {
    check_ptr(s, "samples");
    check_ptr(x0, "x0");
    check_ptr(out, "out");
    *out = ccx::oracle::average_approx_exact(s->s, x0, lambda);
  });
}

ccx_status ccx_moreau_bruteforce(const ccx_grid* f, double lambda, int kind,
                                 ccx_grid** out) {
  return guarded([&] {
    check_ptr(f, "grid");
    check_ptr(out, "out");
    ccx::require(kind == 0 || kind == 1, ccx::ErrorCode::invalid_argument,
                 "kind must be 0 (lower) or 1 (upper)");
    *out = new ccx_grid{ccx::oracle::moreau_bruteforce(
        f->g, lambda,
        kind == 0 ? ccx::oracle::MoreauKind::lower
                  : ccx::oracle::MoreauKind::upper)};
  });
}

ccx_status ccx_spike_upper_value(double alpha, double lambda, double distance,
                                 double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = ccx::oracle::spike_upper_value(alpha, lambda, distance);
  });
}

/* ---- fixtures ----------------------------------------------------------- */

ccx_status ccx_fixture_eval(const char* name, int dim, const double* x,
                            double* out) {
  return guarded([&] {
    check_ptr(name, "name");
    check_ptr(x, "point");
    check_ptr(out, "out");
    *out = ccx::fixture_eval(ccx::fixture_from_name(name),
                             std::span<const double>(x, dim));
  });
}

ccx_status ccx_fixture_info(const char* name, int* has_lip, double* lip,
                            int* has_grad_lip, double* grad_lip,
                            int* has_modulus, double* mod_a, double* mod_b,
                            int* has_far_const, double* far_const,
                            double* far_radius) {
  return guarded([&] {
    check_ptr(name, "name");
    const ccx::FixtureInfo info =
        ccx::fixture_info(ccx::fixture_from_name(name));
    if (has_lip) *has_lip = info.has_lip ? 1 : 0;
    if (lip && info.has_lip) *lip = info.lip;
    if (has_grad_lip) *has_grad_lip = info.has_grad_lip ? 1 : 0;
    if (grad_lip && info.has_grad_lip) *grad_lip = info.grad_lip;
    if (has_modulus) *has_modulus = info.has_modulus ? 1 : 0;
    if (mod_a && info.has_modulus) *mod_a = info.mod_a;
    if (mod_b && info.has_modulus) *mod_b = info.mod_b;
    if (has_far_const) *has_far_const = info.has_far_const ? 1 : 0;
    if (far_const && info.has_far_const) *far_const = info.far_const;
    if (far_radius && info.has_far_const) *far_radius = info.far_radius;
  });
}

ccx_status ccx_fixture_omega(const char* name, double t, double* out) {
  return guarded([&] {
    check_ptr(name, "name");
    check_ptr(out, "out");
    *out = ccx::fixture_omega(ccx::fixture_from_name(name), t);
  });
}

ccx_status ccx_fixture_sqrt_omega_slope(const char* name, int dim,
                                        double* out) {
  return guarded([&] {
    check_ptr(name, "name");
    check_ptr(out, "out");
    *out = ccx::fixture_sqrt_omega_slope(ccx::fixture_from_name(name), dim);
  });
}

ccx_status ccx_fixture_grid(const char* name, int dim, const int64_t* shape,
                            const double* spacing, const double* origin,
                            ccx_grid** out) {
  return guarded([&] {
    check_ptr(name, "name");
    check_ptr(out, "out");
    const ccx::GridDomain dom = make_domain(dim, shape, spacing, origin);
    *out = new ccx_grid{ccx::fixture_grid(ccx::fixture_from_name(name), dom)};
  });
}

ccx_status ccx_spike_grid(int dim, const int64_t* shape, const double* spacing,
                          const double* origin, double alpha, ccx_grid** out) {
  return guarded([&] {
    check_ptr(out, "out");
    const ccx::GridDomain dom = make_domain(dim, shape, spacing, origin);
    *out = new ccx_grid{ccx::spike_grid(dom, alpha)};
  });
}

}  // extern "C"
