#pragma once

#include <array>

#include "rcnav/core/types.hpp"
#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// World-frame corners of the vehicle footprint rectangle, counter-clockwise starting at
/// rear-right. The rectangle is centred footprint_center_offset() ahead of the rear axle.
std::array<Point2D, 4> footprint_corners(const Pose2D& pose, const VehicleParams& params);

/// Bump sensor: true iff the footprint overlaps (with positive area) any Occupied, Unknown
/// or out-of-map cell. The footprint is scan-converted row by row in grid coordinates, so
/// every cell the rectangle touches is tested.
bool check_collision(const OccupancyGrid& grid, const Pose2D& pose, const VehicleParams& params);

/// Euclidean distance (meters) from the footprint to the nearest blocking cell, searched
/// within `max_radius`; returns max_radius when nothing is closer and 0 on collision.
double footprint_clearance(const OccupancyGrid& grid, const Pose2D& pose, const VehicleParams& params,
                           double max_radius = 1.0);

}  // namespace rcnav
