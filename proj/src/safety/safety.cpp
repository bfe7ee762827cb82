#include "rcnav/safety/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"

namespace rcnav {

void SafetyParams::validate() const {
    if (!(ttc_threshold > 0.0) || !(cone_half_angle > 0.0) || !(standoff > 0.0)) {
        throw ConfigError("safety: parameters must be positive");
    }
}

double min_ttc(const LaserScan& scan, const AckermannDrive& cmd, const SafetyParams& sp) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (!(cmd.speed > 0.0)) return kInf;
    // Cone centred on the commanded steering direction, expressed in the scanner frame.
    const double direction = cmd.steering_angle - scan.params.mount.theta;
    double best = kInf;
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        const double r = scan.ranges[i];
        if (scan.is_no_return(r)) continue;
        const double bearing = scan.params.beam_angle(static_cast<int>(i));
        if (std::abs(angle_diff(bearing, direction)) > sp.cone_half_angle) continue;
        best = std::min(best, std::max(r - sp.standoff, 0.0) / cmd.speed);
    }
    return best;
}

std::optional<StampedCommand> safety_tick(const LaserScan& scan, const AckermannDrive& selected_cmd,
                                          const SafetyParams& sp) {
    if (min_ttc(scan, selected_cmd, sp) < sp.ttc_threshold) {
        return StampedCommand{kSafetySource, scan.stamp, {}};
    }
    return std::nullopt;
}

}  // namespace rcnav
