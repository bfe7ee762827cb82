#pragma once

#include "rcnav/core/types.hpp"
#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// Distance in meters from `origin` along world `bearing` to the boundary of the first
/// blocking cell, using exact grid traversal (every cell the ray crosses is visited).
///
/// Occupied cells always block; Unknown cells block iff `unknown_blocks`. Space outside
/// the map does not block: rays that leave the map return `range_max`, and rays from
/// outside the map start at their entry point. Returns 0 when the origin cell blocks and
/// `range_max` when nothing is hit within range.
double raycast(const OccupancyGrid& grid, Point2D origin, double bearing, double range_max, bool unknown_blocks);

}  // namespace rcnav
