#include <doctest.h>

#include <cmath>

#include "ccx/approx.hpp"
#include "ccx/fixtures.hpp"
#include "ccx/geometry.hpp"
#include "ccx/oracle.hpp"
#include "test_helpers.hpp"

using namespace ccx;
using ccxtest::Rng;

namespace {

TransformParams params(double lambda, double m, double s = 0.5,
                       double tau = 0.0) {
  TransformParams p;
  p.lambda = lambda;
  p.m = m;
  p.s = s;
  if (tau > 0.0) p.tau = tau;
  return p;
}

SampleMask two_point_mask(const GridDomain& dom) {
  std::vector<std::uint8_t> m(dom.node_count(), 0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (x == 0.0 || x == 1.0) m[i] = 1;
  }
  return SampleMask(dom, std::move(m));
}

GridFunction two_point_values(const GridDomain& dom) {
  std::vector<double> v(dom.node_count(), 0.0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    if (dom.coord(0, i) == 1.0) v[i] = 1.0;
  }
  return GridFunction(dom, std::move(v));
}

}  // namespace

TEST_CASE("two-point approximations reproduce the closed forms") {
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, -2.0);
  const SampleMask k = two_point_mask(dom);
  const GridFunction f = two_point_values(dom);
  const TransformParams p = params(1.0, 100.0);

  const GridFunction lo = lower_approx(f, k, p);
  const GridFunction hi = upper_approx(f, k, p);
  const GridFunction avg = average_approx(f, k, p);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (x < 0.0 || x > 1.0) continue;
    CHECK(lo[i] == doctest::Approx(2.0 * x - x * x).epsilon(1e-12));
    CHECK(hi[i] == doctest::Approx(x * x).epsilon(1e-12));
    CHECK(avg[i] == doctest::Approx(x).epsilon(1e-12));
  }

  // The exact sample-set operator agrees at the midpoint.
  const ScatteredSamples samples = two_point_samples();
  const double mid = 0.5;
  CHECK(oracle::average_approx_exact(samples, &mid, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("full-mask approximations act on f itself") {
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, -2.0);
  std::vector<double> v(dom.node_count());
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    v[i] = x * x;
  }
  const GridFunction f(dom, std::move(v));
  const SampleMask full = SampleMask::full(dom);
  // Convex-sampled f with lambda at the semiconcavity threshold: the upper
  // approximation interpolates f everywhere on the window.
  const GridFunction hi = upper_approx(f, full, params(1.0, 100.0));
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(hi[i] == doctest::Approx(f[i]).epsilon(1e-12));
  }
  const GridFunction lo = lower_approx(f, full, params(1.0, 100.0));
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(lo[i] == doctest::Approx(f[i]).epsilon(1e-12));
  }
}

TEST_CASE("single-point sample reproduces the spike closed form") {
  // K = {0}, f(0) = 0: the -M extension is a spike of height M over the
  // floor -M, so upper_approx(x) + M follows the spike profile of height M.
  const GridDomain dom = ccxtest::domain_1d(65, 0.25, -8.0);
  std::vector<std::uint8_t> mk(dom.node_count(), 0);
  mk[32] = 1;  // x = 0
  const SampleMask k(dom, std::move(mk));
  const GridFunction f = GridFunction::constant(dom, 0.0);
  const double m = 4.0;
  const GridFunction hi = upper_approx(f, k, params(1.0, m));
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    const double expect = oracle::spike_upper_value(m, 1.0, std::abs(x)) - m;
    CHECK(hi[i] == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("duality and weighted endpoints are bitwise") {
  Rng rng(31415);
  const GridDomain dom = ccxtest::domain_2d(9, 8, 0.5, -2.0, -2.0);
  const GridFunction f = ccxtest::random_grid(dom, rng);
  const SampleMask k = ccxtest::random_mask(dom, rng, 0.35);
  const TransformParams p = params(1.5, 6.0);

  std::vector<double> neg(f.values());
  for (auto& x : neg) x = -x;
  const GridFunction lo = lower_approx(f, k, p);
  const GridFunction hi_neg = upper_approx(GridFunction(dom, std::move(neg)), k, p);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(lo[i] == -hi_neg[i]);
  }

  const GridFunction hi = upper_approx(f, k, p);
  const GridFunction w0 = weighted_average_approx(f, k, params(1.5, 6.0, 0.0));
  const GridFunction w1 = weighted_average_approx(f, k, params(1.5, 6.0, 1.0));
  const GridFunction wh = weighted_average_approx(f, k, params(1.5, 6.0, 0.5));
  const GridFunction avg = average_approx(f, k, p);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(w0[i] == hi[i]);
    CHECK(w1[i] == lo[i]);
    CHECK(wh[i] == avg[i]);
  }
}

TEST_CASE("weighted averages stay between the one-sided approximations") {
  Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const GridDomain dom = ccxtest::domain_1d(33, 0.25, -4.0);
    const GridFunction f = ccxtest::random_grid(dom, rng);
    const SampleMask k = ccxtest::random_mask(dom, rng, 0.3);
    const double lambda = rng.uniform(0.5, 4.0);
    const double m = 2.0 + rng.uniform(0.0, 4.0);
    const double s = rng.uniform(0.0, 1.0);
    const GridFunction lo = lower_approx(f, k, params(lambda, m));
    const GridFunction hi = upper_approx(f, k, params(lambda, m));
    const GridFunction mid = weighted_average_approx(f, k, params(lambda, m, s));
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      CHECK(mid[i] >= std::min(lo[i], hi[i]));
      CHECK(mid[i] <= std::max(lo[i], hi[i]));
    }
  }
}

TEST_CASE("complement identity on random instances") {
  // C^l_lambda(f^M_K) = M - C^u_lambda((M - f) chi_K), both sides computed
  // independently on the same window.
  Rng rng(1618);
  for (int trial = 0; trial < 10; ++trial) {
    const GridDomain dom = ccxtest::domain_2d(9, 9, 0.25, -1.0, -1.0);
    const GridFunction f = ccxtest::random_grid(dom, rng);
    const SampleMask k = ccxtest::random_mask(dom, rng, 0.4);
    const double lambda = rng.uniform(0.5, 4.0);
    const double m = 1.0 + rng.uniform(0.0, 3.0);

    const GridFunction lhs =
        lower_transform(extend_with_constant(f, k, m, ExtendSign::plus), lambda);
    std::vector<double> g(dom.node_count(), 0.0);
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      if (k.is_member(i)) g[i] = m - f[i];
    }
    const GridFunction rhs_inner =
        upper_transform(GridFunction(dom, std::move(g)), lambda);
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      CHECK(std::abs(lhs[i] - (m - rhs_inner[i])) <= 1e-12 * (1.0 + m));
    }
  }
}

TEST_CASE("strict range of one-sided approximations on co[K]") {
  Rng rng(11235);
  for (int trial = 0; trial < 8; ++trial) {
    const GridDomain dom = ccxtest::domain_1d(33, 0.25, -4.0);
    const GridFunction f = ccxtest::random_grid(dom, rng);
    const SampleMask k = ccxtest::random_mask(dom, rng, 0.3);
    const double lambda = rng.uniform(0.5, 2.0);
    const double a0 = bound_a0(f, k);
    const double d_k = k.diameter();
    const double m = min_safe_m(a0, lambda, d_k) * 1.01 + 1e-6;
    const GridFunction lo = lower_approx(f, k, params(lambda, m));
    const GridFunction hi = upper_approx(f, k, params(lambda, m));
    const SampleMask co = co_member_field(k);
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      if (!co.is_member(i)) continue;
      CHECK(lo[i] >= -a0 - 1e-12);
      CHECK(lo[i] < m);
      CHECK(hi[i] <= a0 + 1e-12);
      CHECK(hi[i] > -m);
    }
  }
}

TEST_CASE("odd symmetry pins the average at the origin") {
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, -2.0);
  std::vector<double> v(dom.node_count(), 0.0);
  std::vector<std::uint8_t> mk(dom.node_count(), 0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (x == -1.0 || x == 0.0 || x == 1.0) {
      mk[i] = 1;
      v[i] = x * x * x;  // odd values on a symmetric K
    }
  }
  const GridFunction f(dom, std::move(v));
  const SampleMask k(dom, std::move(mk));
  const GridFunction avg = average_approx(f, k, params(1.0, 8.0));
  CHECK(avg[8] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mixed average stays near the average") {
  Rng rng(555);
  const GridDomain dom = ccxtest::domain_1d(33, 0.25, -4.0);
  const GridFunction f = ccxtest::random_grid(dom, rng);
  const SampleMask k = ccxtest::random_mask(dom, rng, 0.4);
  const double lambda = 1.0;
  const double m = 4.0;

  // Constant data comes back constant wherever the optimizer chains cannot
  // reach past the window edge (inside by one locality radius per stage).
  const GridFunction c = GridFunction::constant(dom, 2.0);
  const SampleMask full = SampleMask::full(dom);
  const double c_lambda = 4.0, c_tau = 40.0, c_m = 2.25;
  const GridFunction mc =
      mixed_average_approx(c, full, params(c_lambda, c_m, 0.5, c_tau));
  const double margin =
      locality_radius(c_m, c_lambda) + locality_radius(c_m, c_tau);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    if (std::abs(dom.coord(0, i)) > 4.0 - margin) continue;
    CHECK(mc[i] == doctest::Approx(2.0).epsilon(1e-12));
  }

  const GridFunction avg = average_approx(f, k, params(lambda, m));
  auto gap_at = [&](double tau) {
    const GridFunction sa =
        mixed_average_approx(f, k, params(lambda, m, 0.5, tau));
    double g = 0.0;
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      g = std::max(g, std::abs(sa[i] - avg[i]));
    }
    return g;
  };
  const double bound10 = 16.0 * m * lambda / (10.0 * lambda);
  const double g10 = gap_at(10.0 * lambda);
  CHECK(g10 <= bound10 + 1e-9 * (1.0 + m));
  const double g100 = gap_at(100.0 * lambda);
  CHECK(g100 <= 16.0 * m * lambda / (100.0 * lambda) + 1e-9 * (1.0 + m));
  CHECK(g100 <= g10 / 2.0);

  TransformParams no_tau = params(lambda, m);
  CHECK_THROWS_AS(mixed_average_approx(f, k, no_tau), Error);
}

TEST_CASE("multivalued bounds") {
  const ScatteredSamples x(1, {0.0, 0.0, 1.0}, {1.0, 3.0, 2.0});
  const MultivaluedBounds b = multivalued_bounds(x);
  REQUIRE(b.lower.count() == 2);
  CHECK(b.lower.points() == std::vector<double>{0.0, 1.0});
  CHECK(b.lower.values() == std::vector<double>{1.0, 2.0});
  CHECK(b.upper.values() == std::vector<double>{3.0, 2.0});

  const ScatteredSamples single(2, {0.0, 0.0, 1.0, 1.0}, {5.0, 6.0});
  const MultivaluedBounds sb = multivalued_bounds(single);
  CHECK(sb.lower.values() == sb.upper.values());

  // Single-valued data rasterizes to identical lower/upper carriers, so the
  // set-valued weighted average collapses to the ordinary one.
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, -2.0);
  const ScatteredSamples sv(1, {0.0, 1.0, -0.5}, {0.25, 1.0, 0.5});
  const RasterizedSamples r = rasterize_samples(sv, dom);
  CHECK(r.lower.values() == r.upper.values());
  const GridFunction from_lower =
      weighted_average_approx(r.lower, r.mask, params(1.0, 6.0, 0.3));
  const GridFunction from_upper =
      weighted_average_approx(r.upper, r.mask, params(1.0, 6.0, 0.3));
  CHECK(from_lower.values() == from_upper.values());
}

TEST_CASE("ring extension") {
  const GridDomain dom = ccxtest::domain_1d(65, 0.25, -8.0);
  std::vector<std::uint8_t> mk(dom.node_count(), 0);
  std::vector<double> v(dom.node_count(), 0.0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (std::abs(x) <= 1.0) {
      mk[i] = 1;
      v[i] = 1.0 - std::abs(x);
    }
  }
  const GridFunction f(dom, std::move(v));
  const SampleMask k(dom, std::move(mk));

  const auto [fr, kr] = ring_extension(f, k, 2.0, 0.0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (std::abs(x) >= 2.0) {
      CHECK(kr.is_member(i));
      CHECK(fr[i] == 0.0);
    } else if (std::abs(x) <= 1.0) {
      CHECK(kr.is_member(i));
      CHECK(fr[i] == f[i]);
    } else {
      CHECK_FALSE(kr.is_member(i));
    }
  }

  // Enlarging the ring by one locality radius leaves interior values alone.
  const double lambda = 1.0, m = 3.0;
  const double shift = locality_radius(m, lambda);
  const auto [fr2, kr2] = ring_extension(f, k, 2.0 + shift, 0.0);
  const GridFunction a1 = average_approx(fr, kr, params(lambda, m));
  const GridFunction a2 = average_approx(fr2, kr2, params(lambda, m));
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    const double x = dom.coord(0, i);
    if (std::abs(x) <= 1.0) {
      CHECK(std::abs(a1[i] - a2[i]) <= 1e-9);
    }
  }

  // Margin validation: a grid that cannot contain the ring plus locality
  // margin is rejected.
  TransformParams big = params(1.0, 100.0);
  CHECK_THROWS_AS(ring_extension(f, k, 2.0, 0.0, big), Error);
}

TEST_CASE("interpolation check") {
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, -2.0);
  const SampleMask k = two_point_mask(dom);
  const GridFunction f = two_point_values(dom);
  const GridFunction avg = average_approx(f, k, params(1.0, 100.0));
  const InterpolationReport ok = interpolation_check(avg, f, k, 1e-9);
  CHECK(ok.pass);
  CHECK(ok.max_abs_dev <= 1e-9);

  // Negative control: a kink sampled with a small lambda misses on K.
  std::vector<double> v(dom.node_count());
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    v[i] = std::abs(dom.coord(0, i));
  }
  const GridFunction kink(dom, std::move(v));
  const SampleMask full = SampleMask::full(dom);
  const GridFunction rough = average_approx(kink, full, params(0.25, 4.0));
  const InterpolationReport bad = interpolation_check(rough, kink, full, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_node >= 0);
}

TEST_CASE("rasterization snaps and collapses") {
  const GridDomain dom = ccxtest::domain_1d(9, 0.25, 0.0);
  // Two samples land on the same node (within half a spacing) and collapse.
  const ScatteredSamples s(1, {0.5, 0.55, 1.0}, {2.0, 4.0, 1.0});
  const RasterizedSamples r = rasterize_samples(s, dom);
  CHECK(r.mask.member_count() == 2);
  CHECK(r.lower[2] == 2.0);
  CHECK(r.upper[2] == 4.0);
  CHECK(r.lower[4] == 1.0);

  const ScatteredSamples outside(1, {5.0}, {1.0});
  CHECK_THROWS_AS(rasterize_samples(outside, dom), Error);
}

TEST_CASE("parameter validation") {
  const GridDomain dom = ccxtest::domain_1d(5, 1.0, 0.0);
  const GridFunction f(dom, {0.0, 1.0, 2.0, 1.0, 0.0});
  const SampleMask k = SampleMask::full(dom);
  CHECK_THROWS_AS(upper_approx(f, k, params(1.0, 1.5)), Error);  // M <= A0
  TransformParams inf_m = params(1.0, 10.0);
  inf_m.m_infinite = true;
  CHECK_THROWS_AS(lower_approx(f, k, inf_m), Error);
  TransformParams bad_s = params(1.0, 10.0, 1.5);
  CHECK_THROWS_AS(weighted_average_approx(f, k, bad_s), Error);
}
