#pragma once

#include <numbers>

namespace expdyn {

// Parabolic parameter: f(z) = (1/e) e^z has a parabolic fixed point at 1.
inline constexpr double kInvE = 1.0 / std::numbers::e;

// Limit of n^2 * (critical lambda_n - 1/e) for the tangent parameter sequence.
inline constexpr double kHalfInvE = 0.5 / std::numbers::e;

// Tracked rectangle P = {1/2 < Re < 3/2, 0 < Im < 1/2} and its diameter sqrt(5)/2.
inline constexpr double kStripReLo = 0.5;
inline constexpr double kStripReHi = 1.5;
inline constexpr double kStripImLo = 0.0;
inline constexpr double kStripImHi = 0.5;
inline constexpr double kStripDiam = 1.1180339887498949;

}  // namespace expdyn
