#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "ccx/grid.hpp"

namespace ccx {

/// Sampled modulus of continuity, its least concave majorant, and the affine
/// bound omega(t) <= a*t + b used by the error-bound formulas. Knot 0 is
/// always present with omega(0) = 0.
struct ModulusModel {
  std::vector<double> knots;
  std::vector<double> omega_f;
  std::vector<double> omega_cav;  // empty until least_concave_majorant runs
  double a = 0.0;
  double b = 0.0;
  bool affine_valid = false;
  std::optional<double> lip;       // Lipschitz constant, when known
  std::optional<double> grad_lip;  // gradient-Lipschitz constant, when known

  bool has_cav() const { return !omega_cav.empty(); }

  /// Concave majorant evaluated off-knot: linear interpolation between knots
  /// and last-chord extension beyond the final knot. Both preserve concavity.
  double eval_cav(double t) const;

  /// Analytic linear modulus omega(t) = slope * t, ready for evaluation.
  static ModulusModel linear(double slope);
  /// The zero modulus (constant functions, characteristic-function case).
  static ModulusModel zero();
  /// From explicit knot samples; omega_cav left empty.
  static ModulusModel from_samples(std::vector<double> knots,
                                   std::vector<double> omega_f);
};

/// Empirical modulus of a grid function: max |f(x)-f(y)| per internode
/// distance, distances binned to at most 256 knots, nondecreasing by
/// cumulative max. Exhaustive pair enumeration up to 4096 nodes, after which
/// max_pairs deterministic pseudo-random pairs are used.
ModulusModel empirical_modulus(const GridFunction& f, std::int64_t max_pairs);

/// Fills omega_cav with the upper concave hull of (knots, omega_f) + (0,0).
void least_concave_majorant(ModulusModel& model);

/// Affine majorant of omega_cav: slope of the final hull segment and its
/// extension to t = 0. Fills model.a / model.b and returns them.
std::pair<double, double> affine_bound(ModulusModel& model);

/// omega(r_c + a/lambda + sqrt(2b/lambda)): approximation error bound for
/// bounded uniformly continuous functions.
double error_bound_uc(double r_c, double lambda, const ModulusModel& model);

/// L*r_c + L^2/lambda: the Lipschitz specialization.
double error_bound_lip(double r_c, double lambda, double l);

/// (L/4)*((lambda+L/2)/(lambda-L/2)+1)*r_c^2 for gradient-Lipschitz
/// functions; requires lambda > L.
double error_bound_c11(double r_c, double lambda, double l);

}  // namespace ccx
