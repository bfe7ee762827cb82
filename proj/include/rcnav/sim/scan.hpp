#pragma once

#include <vector>

#include "rcnav/core/angle.hpp"
#include "rcnav/core/random.hpp"
#include "rcnav/core/types.hpp"
#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

struct ScanParams {
    int beam_count{720};
    double angle_min{-kPi};
    double angle_max{kPi - kTwoPi / 720.0};
    double range_min{0.12};
    double range_max{10.0};
    double range_noise_sigma{0.02};
    /// Unknown cells stop beams (they also stop the car).
    bool unknown_blocks{true};
    /// Scanner pose in the vehicle (rear axle) frame.
    Pose2D mount{};

    /// Throws ConfigError unless beam_count >= 1, angle_min < angle_max, 0 <= range_min < range_max.
    void validate() const;

    [[nodiscard]] double angle_increment() const noexcept {
        return beam_count > 1 ? (angle_max - angle_min) / (beam_count - 1) : 0.0;
    }
    /// Beam angle in the scanner frame.
    [[nodiscard]] double beam_angle(int i) const noexcept {
        return beam_count > 1 ? angle_min + i * (angle_max - angle_min) / (beam_count - 1) : angle_min;
    }
};

struct LaserScan {
    double stamp{0.0};
    std::vector<double> ranges;
    ScanParams params;

    /// True for the no-return sentinel.
    [[nodiscard]] bool is_no_return(double r) const noexcept { return r >= params.range_max; }
};

/// Simulated scan from vehicle pose `pose`. Beams run in parallel; each beam's noise comes
/// from a child stream derived from one key drawn from `rng`, so the output does not depend
/// on the thread count. No-return beams stay exactly range_max; returns are
/// raycast + N(0, sigma) clamped to [range_min, range_max].
LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose, const ScanParams& sp, RandomStream& rng,
                        double stamp = 0.0);

namespace detail {
double scan_beam(const OccupancyGrid& grid, const Pose2D& scanner, const ScanParams& sp, int i,
                 std::uint64_t noise_key);
}

}  // namespace rcnav
