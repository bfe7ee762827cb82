#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcnav/core/types.hpp"

namespace rcnav {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

/// Integer cell coordinates. col grows along the grid x axis, row along the grid y axis;
/// row 0 is the row touching the origin (the bottom of the map image).
struct CellIndex {
    int col{0};
    int row{0};

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Occupancy raster with metric resolution and a world pose for the (0, 0) cell corner.
/// Immutable after construction; safe to share across threads.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    /// Throws ConfigError if resolution <= 0 or cells.size() != width * height.
    OccupancyGrid(int width, int height, double resolution, Pose2D origin, std::vector<Cell> cells);

    /// Grid filled with a single value.
    static OccupancyGrid filled(int width, int height, double resolution, Pose2D origin, Cell value);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] double resolution() const noexcept { return resolution_; }
    [[nodiscard]] const Pose2D& origin() const noexcept { return origin_; }
    [[nodiscard]] std::span<const Cell> cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

    [[nodiscard]] bool in_bounds(int col, int row) const noexcept {
        return col >= 0 && row >= 0 && col < width_ && row < height_;
    }
    [[nodiscard]] std::size_t linear(int col, int row) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }
    /// Unchecked access; (col, row) must be in bounds.
    [[nodiscard]] Cell at(int col, int row) const noexcept { return cells_[linear(col, row)]; }
    [[nodiscard]] Cell at(CellIndex c) const noexcept { return at(c.col, c.row); }

    /// World point -> continuous grid coordinates in cell units (cell (i, j) spans [i, i+1) x [j, j+1)).
    [[nodiscard]] Point2D world_to_grid_continuous(Point2D p) const noexcept {
        const double dx = p.x - origin_.x;
        const double dy = p.y - origin_.y;
        return {(cos_ * dx + sin_ * dy) / resolution_, (-sin_ * dx + cos_ * dy) / resolution_};
    }
    [[nodiscard]] Point2D grid_continuous_to_world(Point2D g) const noexcept {
        const double lx = g.x * resolution_;
        const double ly = g.y * resolution_;
        return {origin_.x + cos_ * lx - sin_ * ly, origin_.y + sin_ * lx + cos_ * ly};
    }
    /// Heading in the grid frame for a world heading.
    [[nodiscard]] double world_to_grid_heading(double theta) const noexcept { return theta - origin_.theta; }

    /// Cell containing the world point, or nullopt when outside the map.
    [[nodiscard]] std::optional<CellIndex> world_to_grid(Point2D p) const noexcept;
    /// World position of the centre of a cell.
    [[nodiscard]] Point2D grid_to_world(CellIndex c) const noexcept {
        return grid_continuous_to_world({c.col + 0.5, c.row + 0.5});
    }

    [[nodiscard]] std::size_t count(Cell value) const noexcept;

private:
    int width_{0};
    int height_{0};
    double resolution_{1.0};
    Pose2D origin_{};
    double cos_{1.0};
    double sin_{0.0};
    std::vector<Cell> cells_;
};

/// True when the cell is Occupied or Unknown, or when it is out of bounds (nullopt).
bool is_occupied(const OccupancyGrid& grid, std::optional<CellIndex> cell) noexcept;

/// Same convention for raw (possibly out-of-bounds) integer coordinates.
inline bool is_blocked(const OccupancyGrid& grid, int col, int row) noexcept {
    return !grid.in_bounds(col, row) || grid.at(col, row) != Cell::Free;
}

}  // namespace rcnav
