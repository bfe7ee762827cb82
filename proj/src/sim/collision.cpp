#include "rcnav/sim/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcnav {
namespace {

double point_segment_distance(Point2D p, Point2D a, Point2D b) noexcept {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

// Distance between two disjoint convex quads given as closed corner loops.
double quad_distance(const std::array<Point2D, 4>& a, const std::array<Point2D, 4>& b) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            best = std::min(best, point_segment_distance(a[i], b[j], b[(j + 1) % 4]));
            best = std::min(best, point_segment_distance(b[j], a[i], a[(i + 1) % 4]));
        }
    }
    return best;
}

}  // namespace

std::array<Point2D, 4> footprint_corners(const Pose2D& pose, const VehicleParams& params) {
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const double off = params.footprint_center_offset();
    const double hl = params.footprint_length / 2.0;
    const double hw = params.footprint_width / 2.0;
    const double local[4][2] = {{off - hl, -hw}, {off + hl, -hw}, {off + hl, hw}, {off - hl, hw}};
    std::array<Point2D, 4> out{};
    for (int i = 0; i < 4; ++i) {
        out[i] = {pose.x + c * local[i][0] - s * local[i][1], pose.y + s * local[i][0] + c * local[i][1]};
    }
    return out;
}

bool check_collision(const OccupancyGrid& grid, const Pose2D& pose, const VehicleParams& params) {
    std::array<Point2D, 4> g{};
    const auto corners = footprint_corners(pose, params);
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    for (int i = 0; i < 4; ++i) {
        g[i] = grid.world_to_grid_continuous(corners[i]);
        ymin = std::min(ymin, g[i].y);
        ymax = std::max(ymax, g[i].y);
    }
    const int row_lo = static_cast<int>(std::floor(ymin));
    const int row_hi = static_cast<int>(std::ceil(ymax)) - 1;
    for (int row = row_lo; row <= row_hi; ++row) {
        const double band_lo = row;
        const double band_hi = row + 1.0;
        double xmin = std::numeric_limits<double>::infinity();
        double xmax = -xmin;
        for (int i = 0; i < 4; ++i) {
            const Point2D a = g[i];
            const Point2D b = g[(i + 1) % 4];
            if (a.y >= band_lo && a.y <= band_hi) {
                xmin = std::min(xmin, a.x);
                xmax = std::max(xmax, a.x);
            }
            for (const double yb : {band_lo, band_hi}) {
                if ((a.y < yb && b.y > yb) || (a.y > yb && b.y < yb)) {
                    const double x = a.x + (yb - a.y) / (b.y - a.y) * (b.x - a.x);
                    xmin = std::min(xmin, x);
                    xmax = std::max(xmax, x);
                }
            }
        }
        if (xmin > xmax) continue;
        const int col_lo = static_cast<int>(std::floor(xmin));
        const int col_hi = std::max(col_lo, static_cast<int>(std::ceil(xmax)) - 1);
        for (int col = col_lo; col <= col_hi; ++col) {
            if (is_blocked(grid, col, row)) return true;
        }
    }
    return false;
}

double footprint_clearance(const OccupancyGrid& grid, const Pose2D& pose, const VehicleParams& params,
                           double max_radius) {
    if (check_collision(grid, pose, params)) return 0.0;
    const auto corners = footprint_corners(pose, params);
    std::array<Point2D, 4> g{};
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (int i = 0; i < 4; ++i) {
        g[i] = grid.world_to_grid_continuous(corners[i]);
        xmin = std::min(xmin, g[i].x);
        xmax = std::max(xmax, g[i].x);
        ymin = std::min(ymin, g[i].y);
        ymax = std::max(ymax, g[i].y);
    }
    const double reach = max_radius / grid.resolution();
    const int c0 = static_cast<int>(std::floor(xmin - reach));
    const int c1 = static_cast<int>(std::floor(xmax + reach));
    const int r0 = static_cast<int>(std::floor(ymin - reach));
    const int r1 = static_cast<int>(std::floor(ymax + reach));
    double best = reach;
    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            if (!is_blocked(grid, col, row)) continue;
            // Cheap reject against the footprint's bounding box.
            const double bx = std::max({col - xmax, xmin - (col + 1.0), 0.0});
            const double by = std::max({row - ymax, ymin - (row + 1.0), 0.0});
            if (std::hypot(bx, by) >= best) continue;
            const std::array<Point2D, 4> cell{Point2D{double(col), double(row)}, Point2D{col + 1.0, double(row)},
                                              Point2D{col + 1.0, row + 1.0}, Point2D{double(col), row + 1.0}};
            best = std::min(best, quad_distance(g, cell));
        }
    }
    return std::min(best * grid.resolution(), max_radius);
}

}  // namespace rcnav
