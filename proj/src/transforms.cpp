#include "ccx/transforms.hpp"

#include <cmath>

namespace ccx {

GridFunction lower_transform(const GridFunction& f, double lambda,
                             const std::optional<Window>& window) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  detail::SweepField field;
  field.init(f, lambda);
  detail::moreau_pass(field, f.domain(), +1, window);
  detail::moreau_pass(field, f.domain(), -1, window);
  return GridFunction(f.domain(), field.canonical_all());
}

GridFunction upper_transform(const GridFunction& f, double lambda,
                             const std::optional<Window>& window) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::bad_params,
          "lambda must be positive");
  detail::SweepField field;
  field.init(f, lambda);
  detail::moreau_pass(field, f.domain(), -1, window);
  detail::moreau_pass(field, f.domain(), +1, window);
  return GridFunction(f.domain(), field.canonical_all());
}

GridFunction mixed_transform(const GridFunction& f, double lambda, double tau,
                             MixedKind kind,
                             const std::optional<Window>& window) {
  require(std::isfinite(tau) && tau > 0.0, ErrorCode::bad_params,
          "tau must be positive");
  if (kind == MixedKind::upper_of_lower) {
    return upper_transform(lower_transform(f, lambda, window), tau, window);
  }
  return lower_transform(upper_transform(f, lambda, window), tau, window);
}

}  // namespace ccx
