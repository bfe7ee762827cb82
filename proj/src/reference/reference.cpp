#include "rcnav/reference.hpp"

#include <cmath>

#include "rcnav/core/errors.hpp"

namespace rcnav::reference {

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose, const ScanParams& sp, RandomStream& rng,
                        double stamp) {
    LaserScan scan{stamp, std::vector<double>(static_cast<std::size_t>(sp.beam_count)), sp};
    const Pose2D scanner = pose_compose(pose, sp.mount);
    const std::uint64_t key = rng.next_u64();
    for (int i = 0; i < sp.beam_count; ++i) {
        scan.ranges[static_cast<std::size_t>(i)] = detail::scan_beam(grid, scanner, sp, i, key);
    }
    return scan;
}

DistanceField build_distance_field(const OccupancyGrid& grid) {
    const int w = grid.width();
    const int h = grid.height();
    const std::size_t n = grid.size();
    std::vector<double> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
        sites[i] = grid.cells()[i] == Cell::Occupied ? 0.0 : detail::kEdtInf;
    }
    std::vector<double> columns(n);
    std::vector<double> squared(n);
    std::vector<int> v(static_cast<std::size_t>(std::max(w, h)) + 1);
    std::vector<double> z(static_cast<std::size_t>(std::max(w, h)) + 1);
    for (int col = 0; col < w; ++col) {
        detail::edt_1d(sites.data() + col, columns.data() + col, h, w, v.data(), z.data());
    }
    for (int row = 0; row < h; ++row) {
        const std::size_t off = static_cast<std::size_t>(row) * w;
        detail::edt_1d(columns.data() + off, squared.data() + off, w, 1, v.data(), z.data());
    }
    const double res = grid.resolution();
    for (auto& d : squared) d = std::sqrt(d) * res;
    return {grid, std::move(squared)};
}

ParticleSet motion_update(const ParticleSet& ps, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                          const ActuationNoise& noise, RandomStream& rng) {
    if (!(dt > 0.0)) throw DomainError("motion_update: dt must be > 0");
    ParticleSet out = ps;
    const std::uint64_t key = rng.next_u64();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.particles[i].pose = detail::move_particle(out.particles[i].pose, cmd, dt, params, noise, key, i);
    }
    return out;
}

SensorUpdateResult sensor_update(const ParticleSet& ps, const LaserScan& scan, const DistanceField& field,
                                 const SensorModelParams& smp) {
    std::vector<double> ll(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) ll[i] = scan_log_likelihood(ps.particles[i].pose, scan, field, smp);
    return detail::fold_log_likelihoods(ps, ll);
}

PlanResult plan(const Pose2D& estimate, const Pose2D& goal, const OccupancyGrid& grid, const RolloutLibrary& lib,
                const CostWeights& weights, const VehicleParams& params) {
    std::vector<Rollout> rollouts;
    rollouts.reserve(static_cast<std::size_t>(lib.size()));
    for (int i = 0; i < lib.size(); ++i) {
        rollouts.push_back(evaluate_rollout(estimate, lib.controls(i), lib.config.dt, grid, goal, weights, params));
    }
    return detail::finish_plan(std::move(rollouts));
}

}  // namespace rcnav::reference
