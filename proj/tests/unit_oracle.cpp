#include <doctest.h>

#include <cmath>
#include <limits>

#include "ccx/oracle.hpp"
#include "test_helpers.hpp"

using namespace ccx;
using namespace ccx::oracle;
using ccxtest::Rng;

namespace {

// Independent 2-D envelope reference: exhaustive search over all points,
// segments, and triangles that can represent x0 as a convex combination.
double envelope_exhaustive_2d(const std::vector<double>& pts,
                              const std::vector<double>& vals, double x0,
                              double y0) {
  const std::size_t n = vals.size();
  double best = std::numeric_limits<double>::infinity();
  const double eps = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(pts[2 * i] - x0) < eps && std::abs(pts[2 * i + 1] - y0) < eps) {
      best = std::min(best, vals[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ax = pts[2 * i], ay = pts[2 * i + 1];
      const double bx = pts[2 * j], by = pts[2 * j + 1];
      const double dx = bx - ax, dy = by - ay;
      const double len2 = dx * dx + dy * dy;
      if (len2 == 0.0) continue;
      const double t = ((x0 - ax) * dx + (y0 - ay) * dy) / len2;
      if (t < -eps || t > 1.0 + eps) continue;
      if (std::abs(ax + t * dx - x0) > eps || std::abs(ay + t * dy - y0) > eps)
        continue;
      best = std::min(best, vals[i] + t * (vals[j] - vals[i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ax = pts[2 * i], ay = pts[2 * i + 1];
        const double bx = pts[2 * j], by = pts[2 * j + 1];
        const double cx = pts[2 * k], cy = pts[2 * k + 1];
        const double det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
        if (std::abs(det) < 1e-12) continue;
        const double wb = ((x0 - ax) * (cy - ay) - (cx - ax) * (y0 - ay)) / det;
        const double wc = ((bx - ax) * (y0 - ay) - (x0 - ax) * (by - ay)) / det;
        const double wa = 1.0 - wb - wc;
        if (wa < -eps || wb < -eps || wc < -eps) continue;
        best = std::min(best, wa * vals[i] + wb * vals[j] + wc * vals[k]);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("convex envelope value on hand instances") {
  {
    const std::vector<double> pts{-1.0, 0.0, 1.0};
    const std::vector<double> vals{1.0, -1.0, 1.0};
    const double x0 = 0.0;
    const auto cert = convex_envelope_value(1, pts, vals, &x0);
    CHECK(cert.value == doctest::Approx(-1.0).epsilon(1e-12));
    REQUIRE(cert.support.size() == 1);
    CHECK(cert.support[0] == 1);
    CHECK(cert.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // Chord of the endpoints beats the middle value.
    const std::vector<double> pts{-1.0, 0.0, 1.0};
    const std::vector<double> vals{0.0, 0.6, 1.0};
    const double x0 = 0.0;
    const auto cert = convex_envelope_value(1, pts, vals, &x0);
    CHECK(cert.value == doctest::Approx(0.5).epsilon(1e-10));
  }
  {
    const std::vector<double> pts{0.0, 1.0};
    const std::vector<double> vals{0.0, 0.0};
    const double x0 = 2.0;
    CHECK_THROWS_AS(convex_envelope_value(1, pts, vals, &x0), Error);
  }
}

TEST_CASE("convex envelope matches exhaustive 2-D search") {
  Rng rng(5150);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 6 + static_cast<int>(rng.index(5));
    std::vector<double> pts(2 * n), vals(n);
    for (int i = 0; i < n; ++i) {
      pts[2 * i] = rng.uniform(-1.0, 1.0);
      pts[2 * i + 1] = rng.uniform(-1.0, 1.0);
      vals[i] = rng.uniform(-2.0, 2.0);
    }
    // Query point: strict convex combination of three distinct samples.
    const int a = 0, b = 1, c = 2;
    double wa = 0.2 + 0.6 * rng.uniform();
    double wb = (1.0 - wa) * rng.uniform();
    double wc = 1.0 - wa - wb;
    const double x0[2] = {
        wa * pts[2 * a] + wb * pts[2 * b] + wc * pts[2 * c],
        wa * pts[2 * a + 1] + wb * pts[2 * b + 1] + wc * pts[2 * c + 1]};
    const auto cert = convex_envelope_value(2, pts, vals, x0);
    const double exhaustive = envelope_exhaustive_2d(pts, vals, x0[0], x0[1]);
    CHECK(cert.value == doctest::Approx(exhaustive).epsilon(1e-7));

    // Certificate structure.
    CHECK(cert.support.size() <= 3);
    double wsum = 0.0, px = 0.0, py = 0.0;
    for (std::size_t s = 0; s < cert.support.size(); ++s) {
      CHECK(cert.weights[s] >= 0.0);
      wsum += cert.weights[s];
      px += cert.weights[s] * pts[2 * cert.support[s]];
      py += cert.weights[s] * pts[2 * cert.support[s] + 1];
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-12);
    CHECK(std::abs(px - x0[0]) <= 1e-9);
    CHECK(std::abs(py - x0[1]) <= 1e-9);
  }
}

TEST_CASE("envelope is monotone under lowering data") {
  Rng rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    std::vector<double> pts(n), vals(n);
    for (int i = 0; i < n; ++i) {
      pts[i] = rng.uniform(-2.0, 2.0);
      vals[i] = rng.uniform(-1.0, 1.0);
    }
    const double x0 = 0.3 * pts[0] + 0.7 * pts[1];
    const double before = convex_envelope_value(1, pts, vals, &x0).value;
    vals[static_cast<std::size_t>(rng.index(n))] -= rng.uniform(0.0, 2.0);
    const double after = convex_envelope_value(1, pts, vals, &x0).value;
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("exact transforms on sample sets") {
  const ScatteredSamples two(1, {0.0, 1.0}, {0.0, 1.0});
  const double half = 0.5;
  CHECK(lower_transform_exact(two, &half, 1.0) ==
        doctest::Approx(0.75).epsilon(1e-10));
  CHECK(average_approx_exact(two, &half, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-9));

  // The envelope value is a convex combination of the shifted data, so it
  // sits above their minimum; at sample points it sits below the data.
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12;
    std::vector<double> pts(n), vals(n);
    for (int i = 0; i < n; ++i) {
      pts[i] = rng.uniform(-1.0, 1.0);
      vals[i] = rng.uniform(-1.0, 1.0);
    }
    const ScatteredSamples s(1, pts, vals);
    const double x0 = 0.5 * (pts[0] + pts[1]);
    const double lambda = 2.0;
    const double lo = lower_transform_exact(s, &x0, lambda);
    double floor = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double d = pts[i] - x0;
      floor = std::min(floor, vals[i] + lambda * d * d);
    }
    CHECK(lo >= floor - 1e-9);
    for (int i = 0; i < n; ++i) {
      CHECK(lower_transform_exact(s, &pts[i], lambda) <= vals[i] + 1e-9);
    }
  }
}

TEST_CASE("sample points of a convex quadratic are fixed points") {
  std::vector<double> pts, vals;
  for (int i = 0; i <= 8; ++i) {
    const double x = -1.0 + 0.25 * i;
    pts.push_back(x);
    vals.push_back(x * x);
  }
  const ScatteredSamples s(1, pts, vals);
  for (const double x0 : {-1.0, -0.5, 0.0, 0.75, 1.0}) {
    CHECK(lower_transform_exact(s, &x0, 1.0) ==
          doctest::Approx(x0 * x0).epsilon(1e-9));
    // Interpolation at large lambda for the average approximation.
    CHECK(average_approx_exact(s, &x0, 64.0) ==
          doctest::Approx(x0 * x0).epsilon(1e-7));
  }
}

TEST_CASE("max principle for the exact average approximation") {
  Rng rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + static_cast<int>(rng.index(10));
    std::vector<double> pts(2 * n), vals(n);
    for (int i = 0; i < n; ++i) {
      pts[2 * i] = rng.uniform(-1.0, 1.0);
      pts[2 * i + 1] = rng.uniform(-1.0, 1.0);
      vals[i] = rng.uniform(-1.0, 1.0);
    }
    // Median-shift the values.
    double lo = 1e300, hi = -1e300;
    for (double v : vals) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mid = 0.5 * (hi + lo);
    for (double& v : vals) v -= mid;
    lo -= mid;
    hi -= mid;

    const ScatteredSamples s(2, pts, vals);
    double w0 = 0.3 + 0.4 * rng.uniform();
    double w1 = (1.0 - w0) * rng.uniform();
    const double w2 = 1.0 - w0 - w1;
    const double x0[2] = {w0 * pts[0] + w1 * pts[2] + w2 * pts[4],
                          w0 * pts[1] + w1 * pts[3] + w2 * pts[5]};
    const double lambda = rng.uniform(0.5, 8.0);
    const double a = average_approx_exact(s, x0, lambda);
    CHECK(a >= lo - 1e-9);
    CHECK(a <= hi + 1e-9);
  }
}

TEST_CASE("exact transforms are affine invariant") {
  Rng rng(987);
  const int n = 10;
  std::vector<double> pts(n), vals(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = rng.uniform(-1.0, 1.0);
    vals[i] = rng.uniform(-1.0, 1.0);
  }
  const double slope = 0.8, intercept = -0.3;
  std::vector<double> affine(vals);
  for (int i = 0; i < n; ++i) affine[i] += slope * pts[i] + intercept;
  const ScatteredSamples s(1, pts, vals);
  const ScatteredSamples t(1, pts, affine);
  const double x0 = 0.5 * (pts[0] + pts[1]);
  const double lambda = 3.0;
  CHECK(average_approx_exact(t, &x0, lambda) ==
        doctest::Approx(average_approx_exact(s, &x0, lambda) + slope * x0 +
                        intercept)
            .epsilon(1e-8));
}

TEST_CASE("brute-force Moreau examples") {
  const GridDomain dom = ccxtest::domain_1d(4, 1.0, 0.0);
  const GridFunction c = GridFunction::constant(dom, 2.5);
  CHECK(moreau_bruteforce(c, 1.0, MoreauKind::lower).values() == c.values());

  const GridFunction spike(dom, {0.0, 100.0, 100.0, 100.0});
  CHECK(moreau_bruteforce(spike, 1.0, MoreauKind::lower).values() ==
        std::vector<double>{0.0, 1.0, 4.0, 9.0});

  const GridDomain big = ccxtest::domain_2d(300, 300, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(
      moreau_bruteforce(GridFunction::constant(big, 0.0), 1.0,
                        MoreauKind::lower),
      Error);
}

TEST_CASE("spike closed form") {
  CHECK(spike_upper_value(1.0, 1.0, 0.0) == 1.0);
  CHECK(spike_upper_value(1.0, 1.0, 0.5) == 0.25);
  CHECK(spike_upper_value(1.0, 1.0, 2.0) == 0.0);
  CHECK(spike_upper_value(4.0, 0.25, 1.0) ==
        doctest::Approx(0.25 * 9.0).epsilon(1e-15));
}
