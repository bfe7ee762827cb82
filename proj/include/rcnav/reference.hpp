#pragma once

// Serial versions of the OpenMP kernels. They share the per-item code with the parallel
// versions and must produce bit-identical results; tests and the benchmark compare the two.

#include "rcnav/control/rollout.hpp"
#include "rcnav/localization/distance_field.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/sim/scan.hpp"

namespace rcnav::reference {

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose2D& pose, const ScanParams& sp, RandomStream& rng,
                        double stamp = 0.0);

DistanceField build_distance_field(const OccupancyGrid& grid);

ParticleSet motion_update(const ParticleSet& ps, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                          const ActuationNoise& noise, RandomStream& rng);

SensorUpdateResult sensor_update(const ParticleSet& ps, const LaserScan& scan, const DistanceField& field,
                                 const SensorModelParams& smp);

PlanResult plan(const Pose2D& estimate, const Pose2D& goal, const OccupancyGrid& grid, const RolloutLibrary& lib,
                const CostWeights& weights, const VehicleParams& params);

}  // namespace rcnav::reference
