#include "rcnav/sim/kinematics.hpp"

#include <cmath>

#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"

namespace rcnav {

Pose2D step_kinematics(const Pose2D& pose, const AckermannDrive& cmd, double dt, const VehicleParams& params) {
    if (!(dt > 0.0)) {
        throw DomainError("step_kinematics: dt must be > 0");
    }
    const double v = cmd.speed;
    const double distance = v * dt;
    const double tan_delta = std::tan(cmd.steering_angle);
    if (std::abs(tan_delta) < kStraightTanThreshold) {
        return {pose.x + distance * std::cos(pose.theta), pose.y + distance * std::sin(pose.theta), pose.theta};
    }
    const double beta = distance * tan_delta / params.wheelbase;
    if (beta == 0.0) {
        return pose;
    }
    const double radius = params.wheelbase / tan_delta;
    const double chord = 2.0 * radius * std::sin(0.5 * beta);
    const double mid = pose.theta + 0.5 * beta;
    return {pose.x + chord * std::cos(mid), pose.y + chord * std::sin(mid), normalize_angle(pose.theta + beta)};
}

}  // namespace rcnav
