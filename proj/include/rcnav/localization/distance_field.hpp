#pragma once

#include <limits>
#include <vector>

#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// Per-cell Euclidean distance (meters, between cell centres) to the nearest Occupied cell.
/// Occupied cells hold 0; a map without Occupied cells holds +infinity everywhere.
class DistanceField {
public:
    DistanceField() = default;
    DistanceField(const OccupancyGrid& grid, std::vector<double> meters);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] double at(int col, int row) const noexcept {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// Distance at the cell containing a world point; +infinity outside the map.
    [[nodiscard]] double lookup(Point2D world) const noexcept;

private:
    int width_{0};
    int height_{0};
    double resolution_{1.0};
    Pose2D origin_{};
    double cos_{1.0};
    double sin_{0.0};
    std::vector<double> values_;
};

/// Exact Euclidean distance transform (separable lower-envelope-of-parabolas algorithm on
/// integer squared distances). Column and row passes run in parallel.
DistanceField build_distance_field(const OccupancyGrid& grid);

namespace detail {
inline constexpr double kEdtInf = std::numeric_limits<double>::infinity();
/// 1D squared distance transform of `f` (0 at sites, +inf elsewhere) with stride access.
void edt_1d(const double* f, double* out, int n, int stride, int* v, double* z);
}  // namespace detail

}  // namespace rcnav
