#pragma once

#include <string>
#include <span>
#include <vector>

#include "rcnav/core/types.hpp"

namespace rcnav {

struct WaypointTarget {
    Pose2D goal{};
    std::size_t index{0};
    bool done{false};
};

/// Picks the first vertex after the one nearest `current` whose arclength from it reaches
/// `lookahead` (else the final vertex). done iff `current` is within goal_tolerance of the
/// final vertex. Throws DomainError on an empty path.
WaypointTarget next_waypoint(std::span<const Pose2D> path, const Pose2D& current, double lookahead = 1.5,
                             double goal_tolerance = 0.3);

/// Inserts evenly spaced vertices so no segment is longer than `spacing`. Original vertices are kept.
std::vector<Pose2D> densify_path(std::span<const Pose2D> path, double spacing = 0.25);

/// Reads a waypoint file: one "x y [theta]" per line, '#' comments. Throws LoadError.
std::vector<Pose2D> load_waypoints(const std::string& path);

}  // namespace rcnav
