#include "rcnav/app/scenarios.hpp"

#include <cmath>

#include "rcnav/core/angle.hpp"

namespace rcnav {

OccupancyGrid walled_box(double width, double height, double resolution, double wall) {
    const int w = static_cast<int>(std::lround((width + 2 * wall) / resolution));
    const int h = static_cast<int>(std::lround((height + 2 * wall) / resolution));
    auto grid = OccupancyGrid::filled(w, h, resolution, {-wall, -wall, 0.0}, Cell::Occupied);
    fill_rect(grid, 0.0, 0.0, width, height, Cell::Free);
    return grid;
}

void fill_rect(OccupancyGrid& grid, double x0, double y0, double x1, double y1, Cell value) {
    std::vector<Cell> cells(grid.cells().begin(), grid.cells().end());
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const Point2D p = grid.grid_to_world({c, r});
            if (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1) cells[grid.linear(c, r)] = value;
        }
    }
    grid = OccupancyGrid(grid.width(), grid.height(), grid.resolution(), grid.origin(), std::move(cells));
}

Scenario room_scenario() {
    Scenario s{walled_box(10.0, 8.0), {5.0, 4.0, 0.0}, {8.0, 4.0}};
    fill_rect(s.grid, 1.0, 1.0, 2.2, 1.8);   // table
    fill_rect(s.grid, 6.5, 7.4, 9.0, 8.0);   // shelf
    fill_rect(s.grid, 8.2, 1.0, 9.2, 2.0);   // crate
    fill_rect(s.grid, 2.0, 5.6, 2.4, 6.0);   // pillar
    fill_rect(s.grid, 0.0, 3.0, 0.6, 5.0);   // couch
    return s;
}

Scenario straight_corridor_scenario() {
    return {walled_box(7.0, 2.0), {0.5, 1.0, 0.0}, {5.9, 1.0}};
}

Scenario obstacle_corridor_scenario() {
    Scenario s{walled_box(18.0, 3.0), {1.0, 1.5, 0.0}, {13.0, 1.5}};
    fill_rect(s.grid, 5.0, 0.0, 6.0, 1.3);
    return s;
}

std::vector<ScriptSegment> figure_eight_script(double wheelbase, double speed, double steering, double total) {
    const double radius = wheelbase / std::tan(std::abs(steering));
    const double loop = kTwoPi * radius / std::abs(speed);
    std::vector<ScriptSegment> out;
    double t = 0.0;
    for (int i = 0; t < total; ++i) {
        const double d = std::min(loop, total - t);
        out.push_back({d, speed, i % 2 == 0 ? steering : -steering});
        t += d;
    }
    return out;
}

AckermannDrive script_command(const std::vector<ScriptSegment>& script, double t) {
    double end = 0.0;
    for (const auto& seg : script) {
        end += seg.duration;
        if (t < end) return {seg.speed, seg.steering};
    }
    return {};
}

double script_duration(const std::vector<ScriptSegment>& script) {
    double total = 0.0;
    for (const auto& seg : script) total += seg.duration;
    return total;
}

}  // namespace rcnav
