#pragma once

#include <span>
#include <string_view>

#include "ccx/grid.hpp"

namespace ccx {

/// Built-in analytic functions with known moduli and smoothness constants,
/// used by the experiment drivers and golden tests.
enum class Fixture {
  one,        // f = 1
  abs_norm,   // f = |x|, Lipschitz 1
  quad,       // f = |x|^2, gradient-Lipschitz 2
  uc_sqrt,    // f = sqrt(|x|), modulus sqrt(t)
  sin_pos,    // f = 1 + sin(x_1 + ... + x_n)/2, strictly positive
  abs_ring,   // f = min(|x|, 1), constant 1 for |x| >= 1
  quad_ring,  // C^{1,1} saturating quadratic, constant 2 for |x| >= 2
  uc_ring,    // f = min(sqrt(|x|), 1), constant 1 for |x| >= 1
};

Fixture fixture_from_name(std::string_view name);
const char* fixture_name(Fixture f);

double fixture_eval(Fixture f, std::span<const double> x);

struct FixtureInfo {
  bool has_lip = false;
  double lip = 0.0;  // global Lipschitz constant
  bool has_grad_lip = false;
  double grad_lip = 0.0;  // gradient-Lipschitz constant
  bool has_modulus = false;
  double mod_a = 0.0;  // omega(t) <= mod_a * t + mod_b
  double mod_b = 0.0;
  bool has_far_const = false;
  double far_const = 0.0;
  double far_radius = 0.0;  // f == far_const for |x| >= far_radius
};
FixtureInfo fixture_info(Fixture f);

/// Concave majorant of the fixture's modulus of continuity. Only valid for
/// fixtures with has_modulus.
double fixture_omega(Fixture f, double t);

/// Linear slope of the modulus of sqrt(f) in the given dimension, for
/// fixtures that are strictly positive (stability drivers).
double fixture_sqrt_omega_slope(Fixture f, int dim);

/// Fixture sampled on every node of the domain.
GridFunction fixture_grid(Fixture f, const GridDomain& domain);

/// Zero background with a single spike of height alpha at the center node.
GridFunction spike_grid(const GridDomain& domain, double alpha);

/// The two-sample 1-D set {(0,0), (1,1)}.
ScatteredSamples two_point_samples();

/// 2-D mask with a dense interior cloud (|x|_inf <= cloud_extent) plus the
/// four box corners (+-1, +-1); the classic convex-density example with
/// r_c((1,0)) = 1. The domain must cover [-1,1]^2.
SampleMask box_corners_mask(const GridDomain& domain, double cloud_extent);

}  // namespace ccx
