#pragma once

#include <optional>

#include "rcnav/core/types.hpp"
#include "rcnav/esc/mux.hpp"
#include "rcnav/sim/scan.hpp"

namespace rcnav {

struct SafetyParams {
    double ttc_threshold{0.7};
    double cone_half_angle{0.5};
    double standoff{0.25};

    void validate() const;
};

/// Minimum time to collision over the beams within +-cone_half_angle of the commanded
/// steering direction: max(range - standoff, 0) / speed. Infinite for speed <= 0 (reverse
/// is not monitored) and when no beam in the cone has a return.
double min_ttc(const LaserScan& scan, const AckermannDrive& cmd, const SafetyParams& sp);

/// Stateless: a stop at the safety source iff min_ttc < ttc_threshold, nothing otherwise.
std::optional<StampedCommand> safety_tick(const LaserScan& scan, const AckermannDrive& selected_cmd,
                                          const SafetyParams& sp);

}  // namespace rcnav
