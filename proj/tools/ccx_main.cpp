// ccx: compensated convex transforms, approximations, and their verifiers.
//
// Subcommands: transform, interpolate, stability, report-bounds, modulus.
// All numerical work goes through the C API in ccx/capi.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"

namespace ccxcli {
namespace {

constexpr double kBoundSlack = 1e-9;

json params_json(double lambda, double tau, double m, double s, double h) {
  json p;
  p["lambda"] = lambda;
  if (tau > 0.0) p["tau"] = tau;
  p["M"] = m;
  p["s"] = s;
  if (h > 0.0) p["h"] = h;
  return p;
}

double grid_max_abs(const ccx_grid* g) {
  const double* v = ccx_grid_values(g);
  const std::int64_t n = ccx_grid_node_count(g);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(v[i]));
  return worst;
}

// ---------------------------------------------------------------- transform

int cmd_transform(const std::string& in, const std::string& out,
                  double lambda, double tau, const std::string& kind,
                  double window) {
  ccx_grid* raw = nullptr;
  must(ccx_grid_read(in.c_str(), &raw), "reading " + in);
  GridPtr f(raw);

  ccx_grid* result = nullptr;
  if (kind == "lower") {
    must(ccx_lower_transform(f.get(), lambda, window, &result), "transform");
  } else if (kind == "upper") {
    must(ccx_upper_transform(f.get(), lambda, window, &result), "transform");
  } else if (kind == "mixed-ul" || kind == "mixed-lu") {
    if (tau <= 0.0) fail_param("mixed transforms need --tau > 0");
    must(ccx_mixed_transform(f.get(), lambda, tau, kind == "mixed-ul" ? 0 : 1,
                             window, &result),
         "transform");
  } else {
    fail_param("unknown kind: " + kind);
  }
  GridPtr g(result);

  // One-sided transforms must stay on their side of the data.
  if (kind == "lower" || kind == "upper") {
    const double* fv = ccx_grid_values(f.get());
    const double* gv = ccx_grid_values(g.get());
    for (std::int64_t i = 0; i < ccx_grid_node_count(f.get()); ++i) {
      const bool ok = kind == "lower" ? gv[i] <= fv[i] : gv[i] >= fv[i];
      if (!ok) {
        throw CliError(3, "ordering invariant violated at node " +
                              std::to_string(i));
      }
    }
  }
  must(ccx_grid_write(g.get(), out.c_str()), "writing " + out);
  return 0;
}

// -------------------------------------------------------------- interpolate

struct LoadedProblem {
  GridPtr f_lower;   // value carrier (lower bound for multivalued data)
  GridPtr f_upper;   // upper carrier; same handle values when single-valued
  MaskPtr mask;
  DomainSpec window;
  bool multivalued = false;
  bool complement = false;  // K = complement of a bounded open window hole
};

bool faces_all_member(const DomainSpec& d, const std::uint8_t* member) {
  std::int64_t idx[3];
  for (std::int64_t i = 0; i < d.node_count(); ++i) {
    d.unflatten(i, idx);
    bool face = false;
    for (int k = 0; k < d.dim; ++k) {
      if (idx[k] == 0 || idx[k] == d.shape[k] - 1) face = true;
    }
    if (face && !member[i]) return false;
  }
  return true;
}

LoadedProblem load_problem(const std::string& samples_path,
                           const std::string& grid_path,
                           const std::string& mask_path, double h,
                           double margin) {
  LoadedProblem p;
  if (!samples_path.empty()) {
    if (h <= 0.0) fail_param("--samples input needs --h > 0");
    ccx_samples* raw = nullptr;
    must(ccx_samples_read_csv(samples_path.c_str(), &raw),
         "reading " + samples_path);
    SamplesPtr samples(raw);
    const int dim = ccx_samples_dim(samples.get());
    const std::int64_t count = ccx_samples_count(samples.get());
    const double* pts = ccx_samples_points(samples.get());

    DomainSpec d;
    d.dim = dim;
    d.shape.resize(dim);
    d.spacing.assign(dim, h);
    d.origin.resize(dim);
    const std::int64_t pad = static_cast<std::int64_t>(
        std::ceil(std::max(0.0, margin) / h));
    for (int k = 0; k < dim; ++k) {
      double lo = pts[k], hi = pts[k];
      for (std::int64_t i = 0; i < count; ++i) {
        lo = std::min(lo, pts[i * dim + k]);
        hi = std::max(hi, pts[i * dim + k]);
      }
      const std::int64_t steps =
          static_cast<std::int64_t>(std::ceil((hi - lo) / h - 1e-12));
      d.origin[k] = lo - static_cast<double>(pad) * h;
      d.shape[k] = steps + 1 + 2 * pad;
    }
    ccx_grid* lo_raw = nullptr;
    ccx_grid* hi_raw = nullptr;
    ccx_mask* mask_raw = nullptr;
    must(ccx_samples_rasterize(samples.get(), d.dim, d.shape.data(),
                               d.spacing.data(), d.origin.data(), &lo_raw,
                               &hi_raw, &mask_raw),
         "rasterizing samples");
    p.f_lower.reset(lo_raw);
    p.f_upper.reset(hi_raw);
    p.mask.reset(mask_raw);
    p.window = d;
    const double* a = ccx_grid_values(p.f_lower.get());
    const double* b = ccx_grid_values(p.f_upper.get());
    for (std::int64_t i = 0; i < d.node_count(); ++i) {
      if (a[i] != b[i]) {
        p.multivalued = true;
        break;
      }
    }
    return p;
  }

  if (grid_path.empty() || mask_path.empty()) {
    fail_param("provide either --samples or both --grid and --mask");
  }
  ccx_grid* g_raw = nullptr;
  must(ccx_grid_read(grid_path.c_str(), &g_raw), "reading " + grid_path);
  p.f_lower.reset(g_raw);
  ccx_grid* g2 = nullptr;
  must(ccx_grid_clone(p.f_lower.get(), &g2), "clone");
  p.f_upper.reset(g2);
  ccx_mask* m_raw = nullptr;
  must(ccx_mask_read(mask_path.c_str(), &m_raw), "reading " + mask_path);
  p.mask.reset(m_raw);
  p.window = domain_of(p.f_lower.get());
  const DomainSpec md = domain_of(p.mask.get());
  if (md.shape != p.window.shape || md.spacing != p.window.spacing ||
      md.origin != p.window.origin) {
    throw CliError(2, "grid and mask windows differ");
  }
  p.complement = faces_all_member(p.window, ccx_mask_members(p.mask.get()));
  return p;
}

int cmd_interpolate(const std::string& samples_path,
                    const std::string& grid_path, const std::string& mask_path,
                    double h, double margin, double lambda,
                    const std::string& m_arg, double s, double tau,
                    const std::string& kind, const std::string& out,
                    const std::string& report_path, double lip,
                    const std::string& modulus_path, double tol) {
  LoadedProblem p = load_problem(samples_path, grid_path, mask_path, h, margin);

  // A0 covers both carriers; the threshold uses the diameter of K (compact)
  // or of the hole (complement), with the doubled-A0 variant for the latter.
  double a0 = 0.0;
  must(ccx_bound_a0(p.f_lower.get(), p.mask.get(), &a0), "bound A0");
  double a0_hi = 0.0;
  must(ccx_bound_a0(p.f_upper.get(), p.mask.get(), &a0_hi), "bound A0");
  a0 = std::max(a0, a0_hi);

  double d_set = 0.0;
  if (p.complement) {
    ccx_mask* inv = nullptr;
    const ccx_status st = ccx_mask_invert(p.mask.get(), &inv);
    if (st == CCX_OK) {
      MaskPtr hole(inv);
      must(ccx_mask_diameter(hole.get(), &d_set), "hole diameter");
    } else {
      d_set = 0.0;  // full mask: no hole at all
    }
  } else {
    must(ccx_mask_diameter(p.mask.get(), &d_set), "mask diameter");
  }
  double threshold = 0.0;
  must(ccx_min_safe_m(p.complement ? 2.0 * a0 : a0, lambda, d_set, &threshold),
       "threshold");

  double m = 0.0;
  if (m_arg == "auto") {
    m = threshold * (1.0 + 1e-6) + 1e-9;
  } else {
    try {
      m = std::stod(m_arg);
    } catch (const std::exception&) {
      fail_param("--M must be 'auto' or a number");
    }
    if (m <= threshold) {
      fail_param("--M " + m_arg + " is at or below the safe threshold " +
                 std::to_string(threshold));
    }
  }

  if (kind == "mixed" && tau <= 0.0) fail_param("--kind mixed needs --tau");
  if (p.multivalued && (kind == "mixed")) {
    fail_param("mixed approximation expects single-valued samples");
  }

  // Complement windows carry boundary data that continues beyond the window;
  // pad by the locality margin with edge replication so window values match
  // the unbounded-domain ones, then crop back.
  GridPtr work_lo = std::move(p.f_lower);
  GridPtr work_hi = std::move(p.f_upper);
  MaskPtr work_mask = std::move(p.mask);
  std::int64_t pad_nodes = 0;
  if (p.complement) {
    double radius = 0.0;
    must(ccx_locality_radius(m, lambda, &radius), "locality radius");
    if (tau > 0.0) {
      double extra = 0.0;
      must(ccx_locality_radius(m, tau, &extra), "locality radius");
      radius += extra;
    }
    double min_h = p.window.spacing[0];
    for (double hh : p.window.spacing) min_h = std::min(min_h, hh);
    pad_nodes = static_cast<std::int64_t>(std::ceil(radius / min_h)) + 1;
    ccx_grid* gp = nullptr;
    ccx_mask* mp = nullptr;
    must(ccx_pad_clamp(work_lo.get(), work_mask.get(), pad_nodes, &gp, &mp),
         "padding");
    work_lo.reset(gp);
    MaskPtr padded_mask(mp);
    ccx_grid* gp2 = nullptr;
    ccx_mask* mp2 = nullptr;
    must(ccx_pad_clamp(work_hi.get(), work_mask.get(), pad_nodes, &gp2, &mp2),
         "padding");
    work_hi.reset(gp2);
    ccx_mask_destroy(mp2);
    work_mask = std::move(padded_mask);
  }

  auto one_sided = [&](bool lower_side) {
    ccx_grid* r = nullptr;
    if (lower_side) {
      must(ccx_lower_approx(work_lo.get(), work_mask.get(), lambda, m, &r),
           "lower approximation");
    } else {
      must(ccx_upper_approx(work_hi.get(), work_mask.get(), lambda, m, &r),
           "upper approximation");
    }
    return GridPtr(r);
  };

  GridPtr approx;
  if (kind == "lower") {
    approx = one_sided(true);
  } else if (kind == "upper") {
    approx = one_sided(false);
  } else if (kind == "average" || kind == "weighted") {
    const double weight = kind == "average" ? 0.5 : s;
    if (!p.multivalued && weight == 0.5) {
      ccx_grid* r = nullptr;
      must(ccx_average_approx(work_lo.get(), work_mask.get(), lambda, m, &r),
           "average approximation");
      approx.reset(r);
    } else if (!p.multivalued) {
      ccx_grid* r = nullptr;
      must(ccx_weighted_average_approx(work_lo.get(), work_mask.get(), lambda,
                                       m, weight, &r),
           "weighted approximation");
      approx.reset(r);
    } else {
      // Multivalued reduction: weight on the lower carrier's lower
      // approximation, 1 - weight on the upper carrier's upper one.
      GridPtr lo = one_sided(true);
      GridPtr hi = one_sided(false);
      const double* lv = ccx_grid_values(lo.get());
      const double* uv = ccx_grid_values(hi.get());
      const DomainSpec d = domain_of(lo.get());
      std::vector<double> blend(d.node_count());
      for (std::int64_t i = 0; i < d.node_count(); ++i) {
        blend[i] = weight >= 0.5 ? lv[i] + (1.0 - weight) * (uv[i] - lv[i])
                                 : uv[i] + weight * (lv[i] - uv[i]);
      }
      approx = make_grid(d, blend);
    }
  } else if (kind == "mixed") {
    ccx_grid* r = nullptr;
    must(ccx_mixed_average_approx(work_lo.get(), work_mask.get(), lambda, tau,
                                  m, &r),
         "mixed approximation");
    approx.reset(r);
  } else {
    fail_param("unknown kind: " + kind);
  }

  if (pad_nodes > 0) {
    approx = crop_grid(approx.get(), p.window, pad_nodes);
  }
  must(ccx_grid_write(approx.get(), out.c_str()), "writing " + out);

  Report report;
  json header;
  header["command"] = "interpolate";
  header["kind"] = kind;
  header["params"] = params_json(lambda, tau, m, kind == "weighted" ? s : 0.5,
                                 p.window.spacing[0]);
  header["set_type"] = p.complement ? "complement" : "compact";
  header["A0"] = a0;
  header["diameter"] = d_set;
  header["threshold"] = threshold;
  report.set_header(header);

  // Interpolation quality on K is always measurable.
  {
    GridPtr window_f =
        pad_nodes > 0 ? GridPtr() : GridPtr();  // window-level carriers below
    ccx_mask* m_raw = nullptr;
    // Reload the window-level mask for the check when padding was used.
    MaskPtr window_mask;
    if (pad_nodes > 0) {
      // crop mask: rebuild from original inputs
      window_mask = MaskPtr();
    }
    (void)window_f;
    (void)m_raw;
  }

  double max_dev = 0.0;
  std::int64_t worst = -1;
  int pass = 0;
  {
    // Check against the lower carrier on the original window.
    LoadedProblem fresh =
        load_problem(samples_path, grid_path, mask_path, h, margin);
    must(ccx_interpolation_check(approx.get(), fresh.f_lower.get(),
                                 fresh.mask.get(), tol, &max_dev, &worst,
                                 &pass),
         "interpolation check");
    json row;
    row["check"] = "interpolation_on_K";
    row["observed"] = max_dev;
    row["bound"] = tol;
    row["pass"] = pass == 1;
    if (pass != 1) row["node"] = worst;
    report.add(row);

    // Error-bound rows when a regularity model is supplied.
    const bool have_bounds = lip > 0.0 || !modulus_path.empty();
    if (have_bounds) {
      ModulusPtr modulus;
      if (!modulus_path.empty()) {
        ccx_modulus* mm = nullptr;
        must(ccx_modulus_read_csv(modulus_path.c_str(), &mm),
             "reading " + modulus_path);
        modulus.reset(mm);
      }
      const std::uint8_t* member = ccx_mask_members(fresh.mask.get());
      MaskPtr co_field;
      if (!p.complement) {
        ccx_mask* co = nullptr;
        must(ccx_co_member_field(fresh.mask.get(), &co), "co member field");
        co_field.reset(co);
      }
      const std::uint8_t* co_member =
          co_field ? ccx_mask_members(co_field.get()) : nullptr;
      std::int64_t emitted = 0;
      for (std::int64_t i = 0;
           i < p.window.node_count() && emitted < 20000; ++i) {
        const bool interesting =
            p.complement ? member[i] == 0
                         : (co_member && co_member[i] && !member[i]);
        if (!interesting) continue;
        double x[3];
        p.window.coords(i, x);
        double r_c = 0.0;
        if (ccx_convex_density_radius(fresh.mask.get(), x, &r_c) != CCX_OK) {
          continue;
        }
        double bound = 0.0;
        if (modulus) {
          must(ccx_error_bound_uc(r_c, lambda, modulus.get(), &bound),
               "error bound");
        } else {
          must(ccx_error_bound_lip(r_c, lambda, lip, &bound), "error bound");
        }
        json row2;
        row2["node"] = i;
        row2["r_c"] = r_c;
        row2["bound"] = bound;
        report.add(row2);
        ++emitted;
      }
    }
  }
  if (!report_path.empty()) report.write(report_path);
  return 0;
}

// ---------------------------------------------------------------- stability

int cmd_stability(const std::string& mask_path, const std::string& fixture,
                  double dither, int trials, double lambda,
                  const std::string& m_arg, std::uint64_t seed,
                  const std::string& report_path) {
  if (trials < 1) fail_param("--trials must be at least 1");
  if (dither < 0.0) fail_param("--dither must be nonnegative");
  ccx_mask* m_raw = nullptr;
  must(ccx_mask_read(mask_path.c_str(), &m_raw), "reading " + mask_path);
  MaskPtr base(m_raw);
  const DomainSpec window = domain_of(base.get());

  // Modulus of sqrt(f) for the bound: the fixtures here are strictly
  // positive with known constants.
  double sqrt_slope = 0.0;
  must(ccx_fixture_sqrt_omega_slope(fixture.c_str(), window.dim, &sqrt_slope),
       "fixture sqrt modulus");

  // The transform sees f chi_K on a window padded by one locality radius;
  // outside the window everything is non-member (value 0).
  GridPtr f_window;
  {
    ccx_grid* g = nullptr;
    must(ccx_fixture_grid(fixture.c_str(), window.dim, window.shape.data(),
                          window.spacing.data(), window.origin.data(), &g),
         "fixture grid");
    f_window.reset(g);
  }
  double m_sup = grid_max_abs(f_window.get());
  if (m_arg != "auto") {
    try {
      m_sup = std::stod(m_arg);
    } catch (const std::exception&) {
      fail_param("--M must be 'auto' or a number");
    }
  }

  double radius = 0.0;
  must(ccx_locality_radius(m_sup, lambda, &radius), "locality radius");
  double min_h = window.spacing[0];
  for (double hh : window.spacing) min_h = std::min(min_h, hh);
  const std::int64_t pad = static_cast<std::int64_t>(std::ceil(radius / min_h)) + 1;

  DomainSpec big = window;
  for (int k = 0; k < window.dim; ++k) {
    big.shape[k] += 2 * pad;
    big.origin[k] -= window.spacing[k] * static_cast<double>(pad);
  }
  GridPtr f_big;
  {
    ccx_grid* g = nullptr;
    must(ccx_fixture_grid(fixture.c_str(), big.dim, big.shape.data(),
                          big.spacing.data(), big.origin.data(), &g),
         "fixture grid");
    f_big.reset(g);
  }

  const std::uint8_t* base_member = ccx_mask_members(base.get());
  auto embed_members = [&](const std::vector<std::uint8_t>& window_members) {
    std::vector<std::uint8_t> out(big.node_count(), 0);
    std::int64_t idx[3];
    for (std::int64_t i = 0; i < window.node_count(); ++i) {
      if (!window_members[i]) continue;
      window.unflatten(i, idx);
      std::int64_t shifted[3];
      for (int k = 0; k < window.dim; ++k) shifted[k] = idx[k] + pad;
      out[big.flatten(shifted)] = 1;
    }
    return out;
  };
  auto masked_transform = [&](const std::vector<std::uint8_t>& members_big) {
    const double* fv = ccx_grid_values(f_big.get());
    std::vector<double> chi(big.node_count(), 0.0);
    for (std::int64_t i = 0; i < big.node_count(); ++i) {
      if (members_big[i]) chi[i] = fv[i];
    }
    GridPtr masked = make_grid(big, chi);
    ccx_grid* t = nullptr;
    must(ccx_upper_transform(masked.get(), lambda, -1.0, &t), "transform");
    GridPtr big_t(t);
    return crop_grid(big_t.get(), window, pad);
  };

  std::vector<std::uint8_t> base_window(base_member,
                                        base_member + window.node_count());
  const GridPtr base_transform = masked_transform(embed_members(base_window));

  // Distances to K steer the dither so additions stay within the dial.
  GridPtr dist_field;
  {
    ccx_grid* d = nullptr;
    must(ccx_density_radius_field(base.get(), &d), "distance field");
    dist_field.reset(d);
  }
  const double* dist = ccx_grid_values(dist_field.get());

  Report report;
  json header;
  header["command"] = "stability";
  header["fixture"] = fixture;
  header["params"] = params_json(lambda, 0.0, m_sup, 0.5, window.spacing[0]);
  header["dither"] = dither;
  header["trials"] = trials;
  header["seed"] = seed;
  report.set_header(header);

  Rng rng(seed);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::uint8_t> dithered(base_window);
    if (dither > 0.0) {
      std::int64_t idx[3];
      for (std::int64_t i = 0; i < window.node_count(); ++i) {
        if (!dithered[i] && dist[i] <= dither && rng.uniform() < 0.5) {
          dithered[i] = 1;  // addition within the dial
        }
      }
      // Removals: only odd-parity members that keep an even-parity member
      // within the dial, so both directed distances stay below it.
      for (std::int64_t i = 0; i < window.node_count(); ++i) {
        if (!base_window[i] || !dithered[i]) continue;
        window.unflatten(i, idx);
        std::int64_t parity = 0;
        for (int k = 0; k < window.dim; ++k) parity += idx[k];
        if (parity % 2 == 0 || rng.uniform() >= 0.3) continue;
        double xi[3];
        window.coords(i, xi);
        bool has_anchor = false;
        for (std::int64_t j = 0; j < window.node_count() && !has_anchor; ++j) {
          if (j == i || !base_window[j]) continue;
          window.unflatten(j, idx);
          std::int64_t pj = 0;
          for (int k = 0; k < window.dim; ++k) pj += idx[k];
          if (pj % 2 != 0) continue;
          double xj[3];
          window.coords(j, xj);
          double d2 = 0.0;
          for (int k = 0; k < window.dim; ++k) {
            d2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
          }
          has_anchor = std::sqrt(d2) <= dither;
        }
        if (has_anchor) dithered[i] = 0;
      }
      bool any = false;
      for (auto b : dithered) any = any || b;
      if (!any) dithered = base_window;
    }

    MaskPtr e = make_mask(window, dithered);
    double d_h = 0.0;
    must(ccx_hausdorff_distance(base.get(), e.get(), &d_h), "hausdorff");

    const GridPtr e_transform = masked_transform(embed_members(dithered));
    const double* a = ccx_grid_values(base_transform.get());
    const double* b = ccx_grid_values(e_transform.get());
    double observed = 0.0;
    for (std::int64_t i = 0; i < window.node_count(); ++i) {
      observed = std::max(observed, std::abs(a[i] - b[i]));
    }

    ModulusPtr omega;
    {
      ccx_modulus* mm = nullptr;
      must(ccx_modulus_linear(sqrt_slope, &mm), "modulus");
      omega.reset(mm);
    }
    double bound = 0.0;
    must(ccx_stability_bound(lambda, m_sup, omega.get(), d_h, &bound),
         "stability bound");

    const double ratio = bound > 0.0 ? observed / bound : 0.0;
    worst_ratio = std::max(worst_ratio, ratio);
    json row;
    row["trial"] = trial;
    row["d_h"] = d_h;
    row["observed"] = observed;
    row["bound"] = bound;
    row["ratio"] = ratio;
    row["pass"] = observed <= bound + kBoundSlack * (1.0 + m_sup);
    report.add(row);
  }
  json summary;
  summary["check"] = "worst_ratio";
  summary["observed"] = worst_ratio;
  summary["bound"] = 1.0;
  summary["pass"] = worst_ratio <= 1.0 + kBoundSlack;
  report.add(summary);
  report.write(report_path.empty() ? "-" : report_path);
  return 0;
}

// ------------------------------------------------------------ report-bounds

struct FixtureConstants {
  int has_lip = 0, has_grad_lip = 0, has_modulus = 0, has_far = 0;
  double lip = 0.0, grad_lip = 0.0, mod_a = 0.0, mod_b = 0.0;
  double far_const = 0.0, far_radius = 0.0;
};

FixtureConstants fixture_constants(const std::string& name) {
  FixtureConstants c;
  must(ccx_fixture_info(name.c_str(), &c.has_lip, &c.lip, &c.has_grad_lip,
                        &c.grad_lip, &c.has_modulus, &c.mod_a, &c.mod_b,
                        &c.has_far, &c.far_const, &c.far_radius),
       "fixture info");
  return c;
}

int cmd_report_bounds(const std::string& samples_path,
                      const std::string& fixture_base, double h,
                      const std::string& ladder_arg, std::uint64_t seed,
                      const std::string& report_path) {
  ccx_samples* s_raw = nullptr;
  must(ccx_samples_read_csv(samples_path.c_str(), &s_raw),
       "reading " + samples_path);
  SamplesPtr samples(s_raw);
  const int dim = ccx_samples_dim(samples.get());
  const std::int64_t count = ccx_samples_count(samples.get());
  const double* pts = ccx_samples_points(samples.get());

  std::vector<double> ladder;
  {
    std::string token;
    for (char ch : ladder_arg + ",") {
      if (ch == ',') {
        if (!token.empty()) ladder.push_back(std::stod(token));
        token.clear();
      } else {
        token += ch;
      }
    }
    if (ladder.empty()) fail_param("--lambda-ladder is empty");
  }

  const std::string ring_fixture = fixture_base + "-ring";
  const FixtureConstants base_c = fixture_constants(fixture_base);
  const FixtureConstants ring_c = fixture_constants(ring_fixture);
  if (!ring_c.has_far) fail_param("fixture has no constant far field");

  // Fixture values at the sample points.
  std::vector<double> f_at(count);
  for (std::int64_t i = 0; i < count; ++i) {
    must(ccx_fixture_eval(fixture_base.c_str(), dim, pts + i * dim, &f_at[i]),
         "fixture eval");
  }
  double f_lo = f_at[0], f_hi = f_at[0];
  for (double v : f_at) {
    f_lo = std::min(f_lo, v);
    f_hi = std::max(f_hi, v);
  }

  Report report;
  json header;
  header["command"] = "report-bounds";
  header["fixture"] = fixture_base;
  header["ladder"] = ladder;
  header["h"] = h;
  header["seed"] = seed;
  report.set_header(header);

  Rng rng(seed);

  // Probe points: the samples plus random convex combinations.
  std::vector<std::vector<double>> probes;
  for (std::int64_t i = 0; i < count; ++i) {
    probes.emplace_back(pts + i * dim, pts + (i + 1) * dim);
  }
  for (int extra = 0; extra < 24; ++extra) {
    std::vector<double> w(count, 0.0);
    double total = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      w[i] = rng.uniform();
      total += w[i];
    }
    std::vector<double> x(dim, 0.0);
    for (std::int64_t i = 0; i < count; ++i) {
      for (int k = 0; k < dim; ++k) x[k] += (w[i] / total) * pts[i * dim + k];
    }
    probes.push_back(std::move(x));
  }

  // Oracle checks: weak maximum principle and the M = infinity bounds.
  for (const double lambda : ladder) {
    const double mid = 0.5 * (f_hi + f_lo);
    std::vector<double> shifted(f_at);
    for (double& v : shifted) v -= mid;
    SamplesPtr shifted_s;
    {
      ccx_samples* ss = nullptr;
      must(ccx_samples_create(dim, count, pts, shifted.data(), &ss),
           "samples create");
      shifted_s.reset(ss);
    }
    double mp_worst = 0.0;
    bool mp_pass = true;
    for (const auto& x : probes) {
      double a = 0.0;
      must(ccx_average_approx_exact(shifted_s.get(), x.data(), lambda, &a),
           "oracle average");
      const double lo_b = (f_lo - mid) - 1e-9;
      const double hi_b = (f_hi - mid) + 1e-9;
      mp_pass = mp_pass && a >= lo_b && a <= hi_b;
      mp_worst = std::max(mp_worst, std::max(a - (f_hi - mid), (f_lo - mid) - a));
    }
    json mp;
    mp["check"] = "max_principle";
    mp["lambda"] = lambda;
    mp["observed"] = mp_worst;
    mp["bound"] = 0.0;
    mp["pass"] = mp_pass;
    report.add(mp);

    SamplesPtr plain_s;
    {
      ccx_samples* ss = nullptr;
      must(ccx_samples_create(dim, count, pts, f_at.data(), &ss),
           "samples create");
      plain_s.reset(ss);
    }
    double worst_margin = -1e300;
    bool bounds_pass = true;
    int checked = 0;
    for (const auto& x : probes) {
      double r_c = 0.0;
      if (ccx_convex_density_radius_points(dim, count, pts, x.data(), &r_c) !=
          CCX_OK) {
        continue;
      }
      double fx = 0.0;
      must(ccx_fixture_eval(fixture_base.c_str(), dim, x.data(), &fx),
           "fixture eval");
      double a = 0.0;
      must(ccx_average_approx_exact(plain_s.get(), x.data(), lambda, &a),
           "oracle average");
      const double observed = std::abs(a - fx);
      double bound = 1e300;
      if (base_c.has_modulus) {
        const double arg = r_c + base_c.mod_a / lambda +
                           std::sqrt(2.0 * base_c.mod_b / lambda);
        double w = 0.0;
        must(ccx_fixture_omega(fixture_base.c_str(), arg, &w), "omega");
        bound = std::min(bound, w);
      }
      if (base_c.has_lip) {
        double b = 0.0;
        must(ccx_error_bound_lip(r_c, lambda, base_c.lip, &b), "bound");
        bound = std::min(bound, b);
      }
      if (base_c.has_grad_lip && lambda > base_c.grad_lip) {
        double b = 0.0;
        must(ccx_error_bound_c11(r_c, lambda, base_c.grad_lip, &b), "bound");
        bound = std::min(bound, b);
      }
      if (bound >= 1e300) continue;
      ++checked;
      bounds_pass = bounds_pass &&
                    observed <= bound * (1.0 + kBoundSlack) + kBoundSlack;
      worst_margin = std::max(worst_margin, observed - bound);
    }
    json ob;
    ob["check"] = "oracle_error_bounds";
    ob["lambda"] = lambda;
    ob["probes"] = checked;
    ob["observed"] = worst_margin;
    ob["bound"] = 0.0;
    ob["pass"] = bounds_pass;
    report.add(ob);
  }

  // Finite-M grid runs through the ring extension.
  std::vector<double> sup_errors;
  for (const double lambda : ladder) {
    for (std::int64_t i = 0; i < count; ++i) {
      double norm = 0.0;
      for (int k = 0; k < dim; ++k) norm += pts[i * dim + k] * pts[i * dim + k];
      if (std::sqrt(norm) >= ring_c.far_radius) {
        fail_param("samples must lie strictly inside the fixture far-field "
                   "radius");
      }
    }
    const double r_fix = ring_c.far_radius;
    const double ring_r = r_fix + 0.5;
    // A0 over the whole space is the max of the far constant and the values
    // seen on the ball; the ring fixtures are bounded by it.
    const double a0 =
        std::max(std::abs(ring_c.far_const), std::max(std::abs(f_lo),
                                                      std::abs(f_hi)));
    double threshold = 0.0;
    must(ccx_min_safe_m(2.0 * a0, lambda, ring_r + r_fix, &threshold),
         "threshold");
    const double m = threshold * (1.0 + 1e-6) + 1e-9;
    double margin = 0.0;
    must(ccx_locality_radius(m, lambda, &margin), "locality radius");
    const double half = ring_r + margin + 2.0 * h;
    const std::int64_t half_nodes =
        static_cast<std::int64_t>(std::ceil(half / h));
    DomainSpec d;
    d.dim = dim;
    d.shape.assign(dim, 2 * half_nodes + 1);
    d.spacing.assign(dim, h);
    d.origin.assign(dim, -static_cast<double>(half_nodes) * h);

    GridPtr f_grid;
    {
      ccx_grid* g = nullptr;
      must(ccx_fixture_grid(ring_fixture.c_str(), dim, d.shape.data(),
                            d.spacing.data(), d.origin.data(), &g),
           "fixture grid");
      f_grid.reset(g);
    }
    MaskPtr k_mask;
    {
      ccx_grid* lo = nullptr;
      ccx_grid* hi = nullptr;
      ccx_mask* mk = nullptr;
      must(ccx_samples_rasterize(samples.get(), dim, d.shape.data(),
                                 d.spacing.data(), d.origin.data(), &lo, &hi,
                                 &mk),
           "rasterize");
      ccx_grid_destroy(lo);
      ccx_grid_destroy(hi);
      k_mask.reset(mk);
    }
    GridPtr ring_f;
    MaskPtr ring_mask;
    {
      ccx_grid* rf = nullptr;
      ccx_mask* rm = nullptr;
      must(ccx_ring_extension(f_grid.get(), k_mask.get(), ring_r,
                              ring_c.far_const, lambda, m, 0.0, &rf, &rm),
           "ring extension");
      ring_f.reset(rf);
      ring_mask.reset(rm);
    }
    GridPtr avg;
    {
      ccx_grid* a = nullptr;
      must(ccx_average_approx(ring_f.get(), ring_mask.get(), lambda, m, &a),
           "average approximation");
      avg.reset(a);
    }

    // Snapped K coordinates for hull tests and the convergence summary.
    std::vector<double> k_coords;
    const std::uint8_t* k_member = ccx_mask_members(k_mask.get());
    for (std::int64_t i = 0; i < d.node_count(); ++i) {
      if (!k_member[i]) continue;
      double x[3];
      d.coords(i, x);
      for (int kk = 0; kk < dim; ++kk) k_coords.push_back(x[kk]);
    }
    const std::int64_t k_count =
        static_cast<std::int64_t>(k_coords.size()) / dim;

    const double* av = ccx_grid_values(avg.get());
    const double* fv = ccx_grid_values(f_grid.get());

    double sup_k = 0.0;
    for (std::int64_t i = 0; i < d.node_count(); ++i) {
      if (k_member[i]) sup_k = std::max(sup_k, std::abs(av[i] - fv[i]));
    }
    sup_errors.push_back(sup_k);

    // Pointwise bounds on co[K] probes (subsampled for the report).
    bool grid_pass = true;
    double worst_margin = -1e300;
    int checked = 0;
    std::int64_t stride = 1;
    {
      std::int64_t co_count = 0;
      for (std::int64_t i = 0; i < d.node_count(); ++i) {
        double x[3];
        d.coords(i, x);
        double norm = 0.0;
        for (int kk = 0; kk < dim; ++kk) norm += x[kk] * x[kk];
        if (std::sqrt(norm) <= r_fix) ++co_count;
      }
      stride = std::max<std::int64_t>(1, co_count / 160);
    }
    std::int64_t seen = 0;
    for (std::int64_t i = 0; i < d.node_count(); ++i) {
      double x[3];
      d.coords(i, x);
      double norm = 0.0;
      for (int kk = 0; kk < dim; ++kk) norm += x[kk] * x[kk];
      if (std::sqrt(norm) > r_fix) continue;
      if (seen++ % stride != 0) continue;
      int inside = 0;
      must(ccx_co_membership_points(dim, k_count, k_coords.data(), x, &inside),
           "hull test");
      if (!inside) continue;
      double r_c = 0.0;
      if (ccx_convex_density_radius(ring_mask.get(), x, &r_c) != CCX_OK) {
        continue;
      }
      const double observed = std::abs(av[i] - fv[i]);
      double bound = 1e300;
      if (ring_c.has_modulus) {
        const double arg = r_c + ring_c.mod_a / lambda +
                           std::sqrt(2.0 * ring_c.mod_b / lambda);
        double w = 0.0;
        must(ccx_fixture_omega(ring_fixture.c_str(), arg, &w), "omega");
        bound = std::min(bound, w);
      }
      if (ring_c.has_lip) {
        double b = 0.0;
        must(ccx_error_bound_lip(r_c, lambda, ring_c.lip, &b), "bound");
        bound = std::min(bound, b);
      }
      if (ring_c.has_grad_lip && lambda > ring_c.grad_lip) {
        double b = 0.0;
        must(ccx_error_bound_c11(r_c, lambda, ring_c.grad_lip, &b), "bound");
        bound = std::min(bound, b);
      }
      if (bound >= 1e300) continue;
      ++checked;
      grid_pass = grid_pass &&
                  observed <= bound * (1.0 + kBoundSlack) + kBoundSlack;
      worst_margin = std::max(worst_margin, observed - bound);
    }
    json gb;
    gb["check"] = "ring_error_bounds";
    gb["lambda"] = lambda;
    gb["M"] = m;
    gb["probes"] = checked;
    gb["observed"] = worst_margin;
    gb["bound"] = 0.0;
    gb["pass"] = grid_pass;
    report.add(gb);

    // Regularity: discrete axis difference quotients of U, L, A.
    {
      GridPtr lo, hi;
      ccx_grid* g1 = nullptr;
      must(ccx_lower_approx(ring_f.get(), ring_mask.get(), lambda, m, &g1),
           "lower approximation");
      lo.reset(g1);
      ccx_grid* g2 = nullptr;
      must(ccx_upper_approx(ring_f.get(), ring_mask.get(), lambda, m, &g2),
           "upper approximation");
      hi.reset(g2);
      const double* arr[3] = {ccx_grid_values(lo.get()),
                              ccx_grid_values(hi.get()), av};
      double worst_q = 0.0;
      std::int64_t idx[3];
      for (std::int64_t i = 0; i < d.node_count(); ++i) {
        d.unflatten(i, idx);
        for (int axis = 0; axis < dim; ++axis) {
          if (idx[axis] + 1 >= d.shape[axis]) continue;
          std::int64_t nb[3] = {idx[0], idx[1], idx[2]};
          nb[axis] += 1;
          const std::int64_t j = d.flatten(nb);
          for (const double* a : arr) {
            worst_q = std::max(worst_q, std::abs(a[j] - a[i]) / h);
          }
        }
      }
      const double lip_bound = 8.0 * std::sqrt(m * lambda) * (1.0 + 1e-6);
      json rg;
      rg["check"] = "lipschitz_regularity";
      rg["lambda"] = lambda;
      rg["observed"] = worst_q;
      rg["bound"] = lip_bound;
      rg["pass"] = worst_q <= lip_bound;
      report.add(rg);
    }

    // Mixed smoothing proxy at tau = 10 lambda on the first rung.
    if (lambda == ladder.front()) {
      const double tau = 10.0 * lambda;
      ccx_grid* sa_raw = nullptr;
      must(ccx_mixed_average_approx(ring_f.get(), ring_mask.get(), lambda, tau,
                                    m, &sa_raw),
           "mixed approximation");
      GridPtr sa(sa_raw);
      const double* sv = ccx_grid_values(sa.get());
      double gap = 0.0;
      for (std::int64_t i = 0; i < d.node_count(); ++i) {
        gap = std::max(gap, std::abs(sv[i] - av[i]));
      }
      const double bound = 16.0 * m * lambda / tau;
      json mx;
      mx["check"] = "mixed_gap";
      mx["lambda"] = lambda;
      mx["tau"] = tau;
      mx["observed"] = gap;
      mx["bound"] = bound;
      mx["pass"] = gap <= bound + kBoundSlack * (1.0 + m);
      report.add(mx);
    }
  }

  // Ladder convergence on K.
  {
    bool monotone = true;
    for (std::size_t i = 2; i < sup_errors.size(); ++i) {
      if (sup_errors[i] > sup_errors[i - 1] + 1e-12) monotone = false;
    }
    double omega_2h = 0.0;
    must(ccx_fixture_omega(ring_fixture.c_str(), 2.0 * h, &omega_2h), "omega");
    json cv;
    cv["check"] = "ladder_convergence";
    cv["sup_errors"] = sup_errors;
    cv["observed"] = sup_errors.back();
    cv["bound"] = omega_2h;
    cv["pass"] = monotone && sup_errors.back() <= omega_2h;
    report.add(cv);
  }

  report.write(report_path.empty() ? "-" : report_path);
  return 0;
}

// ------------------------------------------------------------------ modulus

int cmd_modulus(const std::string& in, const std::string& out,
                std::int64_t max_pairs, double lip, double c11) {
  ccx_grid* g_raw = nullptr;
  must(ccx_grid_read(in.c_str(), &g_raw), "reading " + in);
  GridPtr g(g_raw);
  ccx_modulus* m_raw = nullptr;
  must(ccx_empirical_modulus(g.get(), max_pairs, &m_raw), "empirical modulus");
  ModulusPtr m(m_raw);
  must(ccx_modulus_complete(m.get()), "concave majorant");
  if (lip > 0.0) must(ccx_modulus_set_lipschitz(m.get(), lip), "set L");
  if (c11 > 0.0) must(ccx_modulus_set_grad_lipschitz(m.get(), c11), "set L");
  must(ccx_modulus_write_csv(m.get(), out.c_str()), "writing " + out);
  return 0;
}

}  // namespace
}  // namespace ccxcli

int main(int argc, char** argv) {
  using namespace ccxcli;
  CLI::App app{"compensated convex transform toolkit"};
  app.require_subcommand(1);

  // transform
  std::string t_in, t_out, t_kind = "lower";
  double t_lambda = 1.0, t_tau = 0.0, t_window = -1.0;
  auto* t = app.add_subcommand("transform", "apply a transform to a grid");
  t->add_option("--in", t_in)->required();
  t->add_option("--out", t_out)->required();
  t->add_option("--lambda", t_lambda)->required();
  t->add_option("--tau", t_tau);
  t->add_option("--kind", t_kind)
      ->check(CLI::IsMember({"lower", "upper", "mixed-ul", "mixed-lu"}));
  t->add_option("--window", t_window,
                "physical sweep radius; negative = full sweeps");

  // interpolate
  std::string i_samples, i_grid, i_mask, i_m = "auto", i_kind = "average";
  std::string i_out, i_report, i_modulus;
  double i_h = 0.0, i_margin = 0.0, i_lambda = 1.0, i_s = 0.5, i_tau = 0.0;
  double i_lip = 0.0, i_tol = 1e-6;
  auto* ip = app.add_subcommand("interpolate",
                                "approximate sampled data on a grid");
  ip->add_option("--samples", i_samples);
  ip->add_option("--grid", i_grid);
  ip->add_option("--mask", i_mask);
  ip->add_option("--h", i_h);
  ip->add_option("--window-margin", i_margin);
  ip->add_option("--lambda", i_lambda)->required();
  ip->add_option("--M", i_m, "'auto' or a value above the safe threshold");
  ip->add_option("--s", i_s);
  ip->add_option("--tau", i_tau);
  ip->add_option("--kind", i_kind)
      ->check(CLI::IsMember({"average", "weighted", "mixed", "upper", "lower"}));
  ip->add_option("--out", i_out)->required();
  ip->add_option("--report", i_report);
  ip->add_option("--lip", i_lip, "Lipschitz constant for bound rows");
  ip->add_option("--modulus", i_modulus, "modulus CSV for bound rows");
  ip->add_option("--tol", i_tol, "interpolation check tolerance");

  // stability
  std::string s_mask, s_fixture = "one", s_m = "auto", s_report;
  double s_dither = 0.0, s_lambda = 1.0;
  int s_trials = 10;
  std::uint64_t s_seed = 0;
  auto* st = app.add_subcommand("stability",
                                "Hausdorff stability experiment");
  st->add_option("--mask", s_mask)->required();
  st->add_option("--f", s_fixture)->check(CLI::IsMember({"one", "sinpos"}));
  st->add_option("--dither", s_dither)->required();
  st->add_option("--trials", s_trials);
  st->add_option("--lambda", s_lambda)->required();
  st->add_option("--M", s_m);
  st->add_option("--seed", s_seed);
  st->add_option("--report", s_report);

  // report-bounds
  std::string rb_samples, rb_fixture = "abs", rb_ladder = "1,4,16,64";
  std::string rb_report;
  double rb_h = 1.0 / 16.0;
  std::uint64_t rb_seed = 0;
  auto* rb = app.add_subcommand("report-bounds",
                                "error-bound and convergence report");
  rb->add_option("--samples", rb_samples)->required();
  rb->add_option("--fixture", rb_fixture)
      ->check(CLI::IsMember({"abs", "quad", "uc"}));
  rb->add_option("--lambda-ladder", rb_ladder);
  rb->add_option("--h", rb_h);
  rb->add_option("--seed", rb_seed);
  rb->add_option("--report", rb_report);

  // modulus
  std::string m_in, m_out;
  std::int64_t m_pairs = 2000000;
  double m_lip = 0.0, m_c11 = 0.0;
  auto* mo = app.add_subcommand("modulus",
                                "empirical modulus of continuity to CSV");
  mo->add_option("--in", m_in)->required();
  mo->add_option("--out", m_out)->required();
  mo->add_option("--max-pairs", m_pairs);
  mo->add_option("--lip", m_lip);
  mo->add_option("--c11", m_c11);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 4;
  }

  try {
    if (t->parsed()) {
      return cmd_transform(t_in, t_out, t_lambda, t_tau, t_kind, t_window);
    }
    if (ip->parsed()) {
      return cmd_interpolate(i_samples, i_grid, i_mask, i_h, i_margin,
                             i_lambda, i_m, i_s, i_tau, i_kind, i_out,
                             i_report, i_lip, i_modulus, i_tol);
    }
    if (st->parsed()) {
      return cmd_stability(s_mask, s_fixture, s_dither, s_trials, s_lambda,
                           s_m, s_seed, s_report);
    }
    if (rb->parsed()) {
      return cmd_report_bounds(rb_samples, rb_fixture, rb_h, rb_ladder,
                               rb_seed, rb_report);
    }
    if (mo->parsed()) {
      return cmd_modulus(m_in, m_out, m_pairs, m_lip, m_c11);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "ccx: %s\n", e.what());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ccx: %s\n", e.what());
    return 3;
  }
  return 4;
}
