#pragma once

#include <optional>

#include "ccx/moreau.hpp"

namespace ccx {

enum class MixedKind { upper_of_lower, lower_of_upper };

/// Lower compensated convex transform, computed as the critical mixed Moreau
/// envelope: sup-convolution of the inf-convolution at the same scale.
GridFunction lower_transform(const GridFunction& f, double lambda,
                             const std::optional<Window>& window = {});

/// Upper transform, the reverse composition. Satisfies
/// upper_transform(f) == -lower_transform(-f) bit for bit.
GridFunction upper_transform(const GridFunction& f, double lambda,
                             const std::optional<Window>& window = {});

/// C^u_tau(C^l_lambda(f)) or C^l_tau(C^u_lambda(f)).
GridFunction mixed_transform(const GridFunction& f, double lambda, double tau,
                             MixedKind kind,
                             const std::optional<Window>& window = {});

}  // namespace ccx
