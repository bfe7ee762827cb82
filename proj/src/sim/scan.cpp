#include "rcnav/sim/scan.hpp"

#include <algorithm>

#include "rcnav/core/errors.hpp"
#include "rcnav/sim/raycast.hpp"

namespace rcnav {

void ScanParams::validate() const {
    if (beam_count < 1) throw ConfigError("scan: beam_count must be >= 1");
    if (!(angle_min < angle_max)) throw ConfigError("scan: angle_min must be < angle_max");
    if (!(range_min >= 0.0) || !(range_min < range_max)) {
        throw ConfigError("scan: need 0 <= range_min < range_max");
    }
    if (!(range_noise_sigma >= 0.0)) throw ConfigError("scan: range_noise_sigma must be >= 0");
}

namespace detail {

double scan_beam(const OccupancyGrid& grid, const Pose2D& scanner, const ScanParams& sp, int i,
                 std::uint64_t noise_key) {
    const double bearing = scanner.theta + sp.beam_angle(i);
    const double hit = raycast(grid, position(scanner), bearing, sp.range_max, sp.unknown_blocks);
    if (hit >= sp.range_max) {
        return sp.range_max;
    }
    double r = hit;
    if (sp.range_noise_sigma > 0.0) {
        RandomStream beam_rng = RandomStream::derive(noise_key, static_cast<std::uint64_t>(i));
        r += sp.range_noise_sigma * beam_rng.normal();
    }
    return std::clamp(r, sp.range_min, sp.range_max);
}

}  // namespace detail

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose, const ScanParams& sp, RandomStream& rng,
                        double stamp) {
    LaserScan scan{stamp, std::vector<double>(static_cast<std::size_t>(sp.beam_count)), sp};
    const Pose2D scanner = pose_compose(pose, sp.mount);
    const std::uint64_t key = rng.next_u64();
    double* out = scan.ranges.data();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < sp.beam_count; ++i) {
        out[i] = detail::scan_beam(grid, scanner, sp, i, key);
    }
    return scan;
}

}  // namespace rcnav
