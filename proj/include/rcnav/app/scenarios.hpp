#pragma once

#include <vector>

#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// Axis-aligned free rectangle [0, width] x [0, height] enclosed by walls of the given thickness.
OccupancyGrid walled_box(double width, double height, double resolution = 0.05, double wall = 0.1);

/// Sets every cell whose centre lies in the world rectangle [x0, x1] x [y0, y1].
void fill_rect(OccupancyGrid& grid, double x0, double y0, double x1, double y1, Cell value = Cell::Occupied);

struct Scenario {
    OccupancyGrid grid;
    Pose2D start{};
    Point2D goal{};
};

/// 10 x 8 m room with furniture against the walls and an open centre.
Scenario room_scenario();
/// 7 x 2 m corridor; the goal is 5.4 m straight ahead of the start.
Scenario straight_corridor_scenario();
/// 18 x 3 m corridor with a box blocking the lower half midway.
Scenario obstacle_corridor_scenario();

struct ScriptSegment {
    double duration{0.0};
    double speed{0.0};
    double steering{0.0};
};

/// Alternating full left and right circles at constant speed, truncated to `total` seconds.
std::vector<ScriptSegment> figure_eight_script(double wheelbase, double speed, double steering, double total);

/// Command in effect at time t (zero after the script ends).
AckermannDrive script_command(const std::vector<ScriptSegment>& script, double t);
double script_duration(const std::vector<ScriptSegment>& script);

}  // namespace rcnav
