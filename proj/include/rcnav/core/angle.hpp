#pragma once

#include <numbers>

namespace rcnav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi]. Values already in range are returned bit-for-bit,
/// which makes the function exactly idempotent. Throws DomainError on non-finite input.
double normalize_angle(double a);

/// Signed smallest difference a - b, wrapped into (-pi, pi].
double angle_diff(double a, double b);

}  // namespace rcnav
