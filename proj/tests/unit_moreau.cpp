#include <doctest.h>

#include <cmath>
#include <limits>

#include "ccx/moreau.hpp"
#include "ccx/oracle.hpp"
#include "test_helpers.hpp"

using namespace ccx;
using ccxtest::Rng;

namespace {

// Independent quadratic-time 1-D reference.
std::vector<double> direct_1d(const std::vector<double>& v, double lambda,
                              double h) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double d = h * (static_cast<double>(i) - static_cast<double>(j));
      best = std::min(best, v[j] + lambda * d * d);
    }
    out[i] = best;
  }
  return out;
}

}  // namespace

TEST_CASE("lower_moreau_1d basics") {
  CHECK(lower_moreau_1d(std::vector<double>{5, 5, 5, 5}, 3.0, 0.7) ==
        std::vector<double>{5, 5, 5, 5});

  // Spike dominating its neighbourhood: two-candidate minimum.
  const auto out = lower_moreau_1d(std::vector<double>{0, 100, 100, 100}, 1.0, 1.0);
  CHECK(out == std::vector<double>{0, 1, 4, 9});

  CHECK_THROWS_AS(lower_moreau_1d(std::vector<double>{}, 1.0, 1.0), Error);
  CHECK_THROWS_AS(lower_moreau_1d(std::vector<double>{1.0}, -1.0, 1.0), Error);
}

TEST_CASE("lower_moreau_1d matches the direct minimum") {
  Rng rng(123);
  std::vector<double> v(64);
  for (auto& x : v) x = rng.uniform(-3.0, 3.0);
  const auto fast = lower_moreau_1d(v, 0.7, 0.5);
  const auto slow = direct_1d(v, 0.7, 0.5);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(fast[i] - slow[i]) <= 1e-12 * (1.0 + std::abs(slow[i])));
  }
}

TEST_CASE("n-dimensional envelope equals brute force") {
  Rng rng(456);
  for (int trial = 0; trial < 8; ++trial) {
    const GridDomain dom = ccxtest::domain_2d(16, 16, 0.25, -2.0, -2.0);
    const GridFunction f = ccxtest::random_grid(dom, rng, -2.0, 2.0);
    const double lambda = rng.uniform(0.5, 4.0);

    const GridFunction fast = lower_moreau(f, lambda);
    const GridFunction slow =
        oracle::moreau_bruteforce(f, lambda, oracle::MoreauKind::lower);
    const double scale = 1.0 + ccxtest::max_abs(f.values());
    CHECK(ccxtest::max_abs_diff(fast.values(), slow.values()) <= 1e-12 * scale);

    const GridFunction fast_up = upper_moreau(f, lambda);
    const GridFunction slow_up =
        oracle::moreau_bruteforce(f, lambda, oracle::MoreauKind::upper);
    CHECK(ccxtest::max_abs_diff(fast_up.values(), slow_up.values()) <=
          1e-12 * scale);
  }
}

TEST_CASE("2-D single-source example") {
  // Zero at the center, 100 elsewhere, lambda = 1, h = 1: the value at
  // offset (1,2) is the two-candidate minimum 5.
  const GridDomain dom = ccxtest::domain_2d(9, 9, 1.0, -4.0, -4.0);
  std::vector<double> v(81, 100.0);
  const std::int64_t center[2] = {4, 4};
  v[dom.flatten(center)] = 0.0;
  const GridFunction out = lower_moreau(GridFunction(dom, std::move(v)), 1.0);
  const std::int64_t probe[2] = {5, 6};
  CHECK(out[dom.flatten(probe)] == 5.0);
}

TEST_CASE("upper_moreau of a spike and duality") {
  const GridDomain dom = ccxtest::domain_1d(9, 0.5, -2.0);
  std::vector<double> v(9, 0.0);
  v[4] = 1.0;
  const GridFunction f(dom, std::move(v));
  const GridFunction up = upper_moreau(f, 1.0);
  CHECK(up[4] == 1.0);            // distance 0
  CHECK(up[5] == 0.75);           // max(1 - 0.25, 0)
  CHECK(up[6] == 0.0);            // max(1 - 1, 0)

  Rng rng(9);
  const GridFunction g = ccxtest::random_grid(dom, rng);
  std::vector<double> neg(g.values());
  for (auto& x : neg) x = -x;
  const GridFunction dual = lower_moreau(GridFunction(dom, std::move(neg)), 1.0);
  const GridFunction direct = upper_moreau(g, 1.0);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(direct[i] == -dual[i]);
  }
}

TEST_CASE("envelope sandwich and lambda monotonicity are exact") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const GridDomain dom = ccxtest::domain_2d(12, 11, 0.3, 0.0, 0.0);
    const GridFunction f = ccxtest::random_grid(dom, rng, -4.0, 4.0);
    const double l1 = rng.uniform(0.2, 2.0);
    const double l2 = l1 + rng.uniform(0.1, 3.0);
    const GridFunction lo1 = lower_moreau(f, l1);
    const GridFunction lo2 = lower_moreau(f, l2);
    const GridFunction up1 = upper_moreau(f, l1);
    for (std::int64_t i = 0; i < dom.node_count(); ++i) {
      CHECK(lo1[i] <= f[i]);
      CHECK(f[i] <= up1[i]);
      CHECK(lo1[i] <= lo2[i]);
    }
  }
}

TEST_CASE("constant covariance and sweep-order independence") {
  Rng rng(77);
  const GridDomain dom = ccxtest::domain_2d(10, 13, 0.5, -1.0, -1.0);
  const GridFunction f = ccxtest::random_grid(dom, rng);
  const double c = 2.75;
  std::vector<double> sh(f.values());
  for (auto& x : sh) x += c;
  const GridFunction fc(dom, std::move(sh));
  const GridFunction a = lower_moreau(f, 1.3);
  const GridFunction b = lower_moreau(fc, 1.3);
  for (std::int64_t i = 0; i < dom.node_count(); ++i) {
    CHECK(std::abs(b[i] - (a[i] + c)) <= 1e-12 * (1.0 + std::abs(a[i]) + c));
  }

  // Axis order: transpose the grid, sweep, transpose back.
  const GridDomain domT = ccxtest::domain_2d(13, 10, 0.5, -1.0, -1.0);
  std::vector<double> tv(dom.node_count());
  for (std::int64_t r = 0; r < 10; ++r) {
    for (std::int64_t col = 0; col < 13; ++col) {
      tv[col * 10 + r] = f.values()[r * 13 + col];
    }
  }
  const GridFunction ft(domT, std::move(tv));
  const GridFunction at = lower_moreau(ft, 1.3);
  const double scale = 1.0 + ccxtest::max_abs(f.values());
  for (std::int64_t r = 0; r < 10; ++r) {
    for (std::int64_t col = 0; col < 13; ++col) {
      CHECK(std::abs(at.values()[col * 10 + r] - a.values()[r * 13 + col]) <=
            1e-12 * scale);
    }
  }
}

TEST_CASE("locality_radius formula and windowed equivalence") {
  CHECK(locality_radius(2.0, 8.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(locality_radius(1.0, 1.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));

  Rng rng(5);
  const GridDomain dom = ccxtest::domain_1d(101, 0.1, -5.0);
  const double m = 1.0;
  const double lambda = 2.0;
  GridFunction f = ccxtest::random_grid(dom, rng, -m, m);
  const Window w =
      Window::from_physical_radius(dom, locality_radius(m, lambda));
  const GridFunction full = lower_moreau(f, lambda);
  const GridFunction windowed = lower_moreau(f, lambda, w);
  CHECK(ccxtest::max_abs_diff(full.values(), windowed.values()) <= 1e-12);
}
