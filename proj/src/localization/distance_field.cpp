#include "rcnav/localization/distance_field.hpp"

#include <cmath>

namespace rcnav {

DistanceField::DistanceField(const OccupancyGrid& grid, std::vector<double> meters)
    : width_(grid.width()),
      height_(grid.height()),
      resolution_(grid.resolution()),
      origin_(grid.origin()),
      cos_(std::cos(grid.origin().theta)),
      sin_(std::sin(grid.origin().theta)),
      values_(std::move(meters)) {}

double DistanceField::lookup(Point2D world) const noexcept {
    const double dx = world.x - origin_.x;
    const double dy = world.y - origin_.y;
    const double gx = (cos_ * dx + sin_ * dy) / resolution_;
    const double gy = (-sin_ * dx + cos_ * dy) / resolution_;
    if (!(gx >= 0.0) || !(gy >= 0.0) || gx >= width_ || gy >= height_) {
        return detail::kEdtInf;
    }
    return at(static_cast<int>(gx), static_cast<int>(gy));
}

namespace detail {

// Lower envelope of parabolas y = (x - q)^2 + f(q) over the finite sites only, so every
// intersection is computed from integers and the result is exact.
void edt_1d(const double* f, double* out, int n, int stride, int* v, double* z) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        const double fq = f[static_cast<std::ptrdiff_t>(q) * stride];
        if (fq == kEdtInf) continue;
        double s = 0.0;
        while (k >= 0) {
            const int p = v[k];
            const double fp = f[static_cast<std::ptrdiff_t>(p) * stride];
            s = ((fq + double(q) * q) - (fp + double(p) * p)) / (2.0 * q - 2.0 * p);
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -kEdtInf : s;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) out[static_cast<std::ptrdiff_t>(q) * stride] = kEdtInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (j < k && z[j + 1] < q) ++j;
        const double d = double(q) - v[j];
        out[static_cast<std::ptrdiff_t>(q) * stride] = d * d + f[static_cast<std::ptrdiff_t>(v[j]) * stride];
    }
}

}  // namespace detail

DistanceField build_distance_field(const OccupancyGrid& grid) {
    const int w = grid.width();
    const int h = grid.height();
    const std::size_t n = grid.size();
    std::vector<double> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
        sites[i] = grid.cells()[i] == Cell::Occupied ? 0.0 : detail::kEdtInf;
    }
    std::vector<double> columns(n);
    std::vector<double> squared(n);

#pragma omp parallel
    {
        std::vector<int> v(static_cast<std::size_t>(std::max(w, h)) + 1);
        std::vector<double> z(static_cast<std::size_t>(std::max(w, h)) + 1);
#pragma omp for schedule(static)
        for (int col = 0; col < w; ++col) {
            detail::edt_1d(sites.data() + col, columns.data() + col, h, w, v.data(), z.data());
        }
#pragma omp for schedule(static)
        for (int row = 0; row < h; ++row) {
            const std::size_t off = static_cast<std::size_t>(row) * w;
            detail::edt_1d(columns.data() + off, squared.data() + off, w, 1, v.data(), z.data());
        }
    }
    const double res = grid.resolution();
    for (auto& d : squared) d = std::sqrt(d) * res;
    return {grid, std::move(squared)};
}

}  // namespace rcnav
