#pragma once

#include <optional>

#include "conespec/parts.hpp"
#include "conespec/point.hpp"

namespace conespec {

/// A certified approximate solution of f(x) = lambda x. `residual` is
/// ||f(x) - lambda x|| in the cone norm at the stored (unit-norm) vector;
/// `part` is filled on orthant/polyhedral cones.
struct EigenPair {
    Point vector;
    double value = 0.0;
    double residual = 0.0;
    std::optional<PartSignature> part;
};

}  // namespace conespec
