#include "rcnav/map/occupancy_grid.hpp"

#include <algorithm>
#include <string>

#include "rcnav/core/errors.hpp"

namespace rcnav {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Pose2D origin,
                             std::vector<Cell> cells)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      cos_(std::cos(origin.theta)),
      sin_(std::sin(origin.theta)),
      cells_(std::move(cells)) {
    if (width < 0 || height < 0) {
        throw ConfigError("occupancy grid: negative dimensions");
    }
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw ConfigError("occupancy grid: resolution must be > 0");
    }
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ConfigError("occupancy grid: cell count " + std::to_string(cells_.size()) +
                          " does not match " + std::to_string(width) + "x" + std::to_string(height));
    }
}

OccupancyGrid OccupancyGrid::filled(int width, int height, double resolution, Pose2D origin, Cell value) {
    return {width, height, resolution, origin,
            std::vector<Cell>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value)};
}

std::optional<CellIndex> OccupancyGrid::world_to_grid(Point2D p) const noexcept {
    const Point2D g = world_to_grid_continuous(p);
    if (!(g.x >= 0.0) || !(g.y >= 0.0) || g.x >= width_ || g.y >= height_) {
        return std::nullopt;
    }
    const CellIndex c{static_cast<int>(std::floor(g.x)), static_cast<int>(std::floor(g.y))};
    if (!in_bounds(c.col, c.row)) {
        return std::nullopt;
    }
    return c;
}

std::size_t OccupancyGrid::count(Cell value) const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), value));
}

bool is_occupied(const OccupancyGrid& grid, std::optional<CellIndex> cell) noexcept {
    if (!cell || !grid.in_bounds(cell->col, cell->row)) {
        return true;
    }
    return grid.at(*cell) != Cell::Free;
}

}  // namespace rcnav
