#pragma once

#include "rcnav/core/types.hpp"

namespace rcnav {

/// Below this |tan(steering)| the step is integrated as a straight line.
inline constexpr double kStraightTanThreshold = 1e-9;

/// Exact constant-command integration of the kinematic bicycle model about the rear axle.
///
/// With beta = v dt tan(delta) / L and R = L / tan(delta) the pose moves along the arc
///   x += R (sin(theta + beta) - sin theta),  y += R (cos theta - cos(theta + beta)).
/// The implementation uses the equivalent chord form
///   x += c cos(theta + beta/2),  y += c sin(theta + beta/2),  c = 2 R sin(beta/2),
/// which stays accurate for large R. Throws DomainError if dt <= 0.
Pose2D step_kinematics(const Pose2D& pose, const AckermannDrive& cmd, double dt, const VehicleParams& params);

}  // namespace rcnav
