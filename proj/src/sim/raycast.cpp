#include "rcnav/sim/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcnav {
namespace {

inline bool blocks(const OccupancyGrid& grid, int col, int row, bool unknown_blocks) noexcept {
    const Cell c = grid.at(col, row);
    return c == Cell::Occupied || (unknown_blocks && c == Cell::Unknown);
}

}  // namespace

double raycast(const OccupancyGrid& grid, Point2D origin, double bearing, double range_max, bool unknown_blocks) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (grid.width() == 0 || grid.height() == 0) {
        return range_max;
    }
    const double res = grid.resolution();
    const Point2D g0 = grid.world_to_grid_continuous(origin);
    const double phi = grid.world_to_grid_heading(bearing);
    const double dx = std::cos(phi);
    const double dy = std::sin(phi);
    const double t_limit = range_max / res;  // in cell units

    // Clip the ray against the map rectangle [0, W] x [0, H].
    double t_enter = 0.0;
    double t_exit = kInf;
    const double lo[2] = {0.0, 0.0};
    const double hi[2] = {static_cast<double>(grid.width()), static_cast<double>(grid.height())};
    const double p0[2] = {g0.x, g0.y};
    const double d[2] = {dx, dy};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (p0[axis] < lo[axis] || p0[axis] >= hi[axis]) return range_max;
            continue;
        }
        double t0 = (lo[axis] - p0[axis]) / d[axis];
        double t1 = (hi[axis] - p0[axis]) / d[axis];
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
    }
    if (t_enter >= t_exit || t_enter > t_limit) {
        return range_max;
    }

    const double px = g0.x + t_enter * dx;
    const double py = g0.y + t_enter * dy;
    int col = std::clamp(static_cast<int>(std::floor(px)), 0, grid.width() - 1);
    int row = std::clamp(static_cast<int>(std::floor(py)), 0, grid.height() - 1);

    const int step_col = dx > 0.0 ? 1 : -1;
    const int step_row = dy > 0.0 ? 1 : -1;
    const double delta_col = dx != 0.0 ? std::abs(1.0 / dx) : kInf;
    const double delta_row = dy != 0.0 ? std::abs(1.0 / dy) : kInf;
    double next_col = kInf;
    double next_row = kInf;
    if (dx > 0.0) next_col = t_enter + (col + 1 - px) / dx;
    if (dx < 0.0) next_col = t_enter + (col - px) / dx;
    if (dy > 0.0) next_row = t_enter + (row + 1 - py) / dy;
    if (dy < 0.0) next_row = t_enter + (row - py) / dy;

    double t = t_enter;
    for (;;) {
        if (blocks(grid, col, row, unknown_blocks)) {
            return std::min(t * res, range_max);
        }
        if (next_col < next_row) {
            t = next_col;
            next_col += delta_col;
            col += step_col;
        } else {
            t = next_row;
            next_row += delta_row;
            row += step_row;
        }
        if (t > t_limit || !grid.in_bounds(col, row)) {
            return range_max;
        }
    }
}

}  // namespace rcnav
