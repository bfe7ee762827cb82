#include "rcnav/core/types.hpp"

#include <algorithm>

#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"

namespace rcnav {

Pose2D pose_compose(const Pose2D& a, const Pose2D& b) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, normalize_angle(a.theta + b.theta)};
}

Pose2D pose_inverse(const Pose2D& p) {
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    return {-c * p.x - s * p.y, s * p.x - c * p.y, normalize_angle(-p.theta)};
}

void VehicleParams::validate() const {
    if (!(wheelbase > 0.0)) throw ConfigError("vehicle: wheelbase must be > 0");
    if (!(footprint_length > 0.0) || !(footprint_width > 0.0)) {
        throw ConfigError("vehicle: footprint dimensions must be > 0");
    }
    if (!(rear_overhang >= 0.0)) throw ConfigError("vehicle: rear_overhang must be >= 0");
    if (!(steering_limit > 0.0)) throw ConfigError("vehicle: steering_limit must be > 0");
    if (!(speed_limit > 0.0)) throw ConfigError("vehicle: speed_limit must be > 0");
}

AckermannDrive clamp_to_limits(const AckermannDrive& cmd, const VehicleParams& params) noexcept {
    return {std::clamp(cmd.speed, -params.speed_limit, params.speed_limit),
            std::clamp(cmd.steering_angle, -params.steering_limit, params.steering_limit)};
}

}  // namespace rcnav
