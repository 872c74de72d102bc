#pragma once

#include "femsel/beam_structure.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace femsel {

enum class ObjectiveKind { aic, sse };

std::string_view to_string(ObjectiveKind kind);
/// Accepts "AIC"/"SSE" in any case; throws std::invalid_argument otherwise.
ObjectiveKind parse_objective_kind(std::string_view text);

/// Lower is better for both kinds.
struct ObjectiveValue {
    ObjectiveKind kind = ObjectiveKind::aic;
    double value = 0.0;
    double sigma_squared = 0.0;  // Hz^2
    std::size_t d = 0;
    std::size_t n = 0;
};

/// Floor on sigma^2 inside the logarithm.
inline constexpr double kSigmaSquaredFloor = 1e-12;

using Residuals = std::array<double, 5>;

/// measured - fem, in Hz. Throws std::invalid_argument unless fem has 5 entries.
Residuals residuals(const MeasuredData& measured, std::span<const double> fem);

/// Half the sum of squared residuals.
ObjectiveValue sse(const Residuals& r);

/// n ln(max(sigma^2, floor)) + 2d with sigma^2 = sum(r^2) / n.
ObjectiveValue aic(const Residuals& r, std::size_t d);

ObjectiveValue evaluate_objective(ObjectiveKind kind, const Residuals& r, std::size_t d);

}  // namespace femsel
