#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ccx/grid_io.hpp"
#include "ccx/moduli.hpp"
#include "test_helpers.hpp"

using namespace ccx;
using ccxtest::Rng;

TEST_CASE("empirical modulus on hand instances") {
  {
    const GridDomain dom = ccxtest::domain_1d(3, 1.0, 0.0);
    const ModulusModel m =
        empirical_modulus(GridFunction(dom, {0.0, 1.0, 0.0}), 0);
    REQUIRE(m.knots.size() == 3);
    CHECK(m.knots[1] == 1.0);
    CHECK(m.knots[2] == 2.0);
    CHECK(m.omega_f[1] == 1.0);
    CHECK(m.omega_f[2] == 1.0);
  }
  {
    const GridDomain dom = ccxtest::domain_1d(9, 0.5, 0.0);
    const ModulusModel m =
        empirical_modulus(GridFunction::constant(dom, 3.0), 0);
    for (double w : m.omega_f) CHECK(w == 0.0);
  }
  {
    // f(x) = x on [0,1]: the modulus is exactly t at every knot.
    const GridDomain dom = ccxtest::domain_1d(9, 0.125, 0.0);
    std::vector<double> v(9);
    for (int i = 0; i < 9; ++i) v[i] = 0.125 * i;
    const ModulusModel m = empirical_modulus(GridFunction(dom, v), 0);
    for (std::size_t i = 0; i < m.knots.size(); ++i) {
      CHECK(m.omega_f[i] == doctest::Approx(m.knots[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("least concave majorant") {
  {
    ModulusModel m = ModulusModel::from_samples({0.0, 1.0, 2.0, 3.0},
                                                {0.0, 1.0, 1.2, 2.0});
    least_concave_majorant(m);
    REQUIRE(m.omega_cav.size() == 4);
    CHECK(m.omega_cav[0] == 0.0);
    CHECK(m.omega_cav[1] == 1.0);
    CHECK(m.omega_cav[2] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(m.omega_cav[3] == 2.0);
  }
  {
    // Concave (here: linear) input is a fixed point.
    ModulusModel m = ModulusModel::from_samples({0.0, 1.0, 2.0, 4.0},
                                                {0.0, 0.5, 1.0, 2.0});
    least_concave_majorant(m);
    for (std::size_t i = 0; i < m.knots.size(); ++i) {
      CHECK(m.omega_cav[i] == doctest::Approx(m.omega_f[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("majorant properties on random empirical moduli") {
  Rng rng(321);
  for (int trial = 0; trial < 10; ++trial) {
    const GridDomain dom = ccxtest::domain_2d(9, 8, 0.3, 0.0, 0.0);
    ModulusModel m = empirical_modulus(ccxtest::random_grid(dom, rng), 0);
    least_concave_majorant(m);
    affine_bound(m);
    const std::size_t n = m.knots.size();
    CHECK(m.omega_cav[0] == 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      CHECK(m.omega_cav[i] <= m.omega_cav[i + 1] + 1e-14);  // nondecreasing
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m.omega_f[i] <= m.omega_cav[i] + 1e-14);
      CHECK(0.5 * m.omega_cav[i] <= m.omega_f[i] + 1e-14);
      CHECK(m.omega_cav[i] <= m.a * m.knots[i] + m.b + 1e-12);
    }
    // Concavity: interior knots sit on or above their neighbour chords.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double w = (m.knots[i] - m.knots[i - 1]) /
                       (m.knots[i + 1] - m.knots[i - 1]);
      const double chord =
          m.omega_cav[i - 1] + w * (m.omega_cav[i + 1] - m.omega_cav[i - 1]);
      CHECK(m.omega_cav[i] >= chord - 1e-12);
    }
  }
}

TEST_CASE("empirical modulus is subadditive at compatible knots") {
  Rng rng(654);
  for (int trial = 0; trial < 6; ++trial) {
    const GridDomain dom = ccxtest::domain_1d(33, 0.25, 0.0);
    const ModulusModel m =
        empirical_modulus(ccxtest::random_grid(dom, rng), 0);
    const auto find_knot = [&](double t) -> int {
      for (std::size_t i = 0; i < m.knots.size(); ++i) {
        if (std::abs(m.knots[i] - t) <= 1e-12) return static_cast<int>(i);
      }
      return -1;
    };
    for (std::size_t i = 1; i < m.knots.size(); ++i) {
      for (std::size_t j = i; j < m.knots.size(); ++j) {
        const int k = find_knot(m.knots[i] + m.knots[j]);
        if (k < 0) continue;
        CHECK(m.omega_f[k] <= m.omega_f[i] + m.omega_f[j] + 1e-12);
      }
    }
  }
}

TEST_CASE("affine bound") {
  {
    ModulusModel m = ModulusModel::linear(1.0);
    const auto [a, b] = affine_bound(m);
    CHECK(a == 1.0);
    CHECK(b == 0.0);
  }
  {
    // Hull (0,0) -> (1,1) -> (3,2): final slope 1/2, intercept 1/2.
    ModulusModel m =
        ModulusModel::from_samples({0.0, 1.0, 3.0}, {0.0, 1.0, 2.0});
    least_concave_majorant(m);
    const auto [a, b] = affine_bound(m);
    CHECK(a == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a * 1.0 + b >= 1.0);
  }
  {
    ModulusModel m = ModulusModel::zero();
    const auto [a, b] = affine_bound(m);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
  }
}

TEST_CASE("error bound evaluators") {
  // Linear modulus reduces the UC bound to the Lipschitz bound exactly.
  for (const double l : {0.5, 1.0, 2.0}) {
    ModulusModel m = ModulusModel::linear(l);
    for (const double rc : {0.0, 0.3, 1.5}) {
      for (const double lambda : {1.0, 8.0}) {
        CHECK(error_bound_uc(rc, lambda, m) ==
              doctest::Approx(error_bound_lip(rc, lambda, l)).epsilon(1e-12));
      }
    }
  }

  CHECK(error_bound_lip(0.5, 10.0, 2.0) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(error_bound_lip(1.0, 4.0, 0.0) == 0.0);
  CHECK(error_bound_lip(0.0, 3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-14));

  CHECK(error_bound_c11(1.0, 4.0, 2.0) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(error_bound_c11(0.0, 4.0, 2.0) == 0.0);
  // lambda -> infinity approaches (L/2) r_c^2.
  CHECK(error_bound_c11(1.0, 1e9, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(error_bound_c11(1.0, 2.0, 2.0), Error);

  // r_c = 0.5, lambda = 10, a = 1, b = 0.02 with omega(t) = t.
  ModulusModel lin = ModulusModel::linear(1.0);
  lin.b = 0.02;
  const double expect = 0.5 + 0.1 + std::sqrt(2.0 * 0.02 / 10.0);
  CHECK(error_bound_uc(0.5, 10.0, lin) == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("bounds are monotone in r_c and lambda") {
  ModulusModel m = ModulusModel::from_samples(
      {0.0, 0.5, 1.0, 2.0, 4.0}, {0.0, 0.4, 0.7, 1.0, 1.2});
  least_concave_majorant(m);
  affine_bound(m);
  double prev = -1.0;
  for (const double rc : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double v = error_bound_uc(rc, 2.0, m);
    CHECK(v >= prev);
    prev = v;
    CHECK(error_bound_lip(rc, 2.0, 1.0) <= error_bound_lip(rc, 1.0, 1.0));
    CHECK(error_bound_uc(rc, 4.0, m) <= error_bound_uc(rc, 2.0, m) + 1e-14);
    CHECK(error_bound_c11(rc, 8.0, 2.0) <= error_bound_c11(rc, 4.0, 2.0));
  }
}

TEST_CASE("modulus CSV round trip") {
  const GridDomain dom = ccxtest::domain_1d(17, 0.25, 0.0);
  Rng rng(12);
  ModulusModel m = empirical_modulus(ccxtest::random_grid(dom, rng), 0);
  least_concave_majorant(m);
  affine_bound(m);
  m.lip = 2.5;
  write_modulus_csv(m, "modulus_test.csv");
  const ModulusModel r = read_modulus_csv("modulus_test.csv");
  CHECK(r.knots == m.knots);
  CHECK(r.omega_f == m.omega_f);
  CHECK(r.omega_cav == m.omega_cav);
  CHECK(r.a == m.a);
  CHECK(r.b == m.b);
  REQUIRE(r.lip.has_value());
  CHECK(*r.lip == 2.5);
  CHECK_FALSE(r.grad_lip.has_value());
  std::filesystem::remove("modulus_test.csv");
}

TEST_CASE("concave evaluation interpolates and extends") {
  ModulusModel m =
      ModulusModel::from_samples({0.0, 1.0, 3.0}, {0.0, 1.0, 2.0});
  least_concave_majorant(m);
  affine_bound(m);
  CHECK(m.eval_cav(0.0) == 0.0);
  CHECK(m.eval_cav(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.eval_cav(2.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(m.eval_cav(5.0) == doctest::Approx(3.0).epsilon(1e-14));  // last chord
}
