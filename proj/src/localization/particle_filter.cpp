#include "rcnav/localization/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"
#include "rcnav/sim/kinematics.hpp"

namespace rcnav {

double ParticleSet::total_weight() const noexcept {
    double sum = 0.0;
    for (const auto& p : particles) sum += p.weight;
    return sum;
}

void SensorModelParams::validate() const {
    if (!(sigma_hit > 0.0)) throw ConfigError("sensor model: sigma_hit must be > 0");
    if (z_hit < 0.0 || z_rand < 0.0 || std::abs(z_hit + z_rand - 1.0) > 1e-9) {
        throw ConfigError("sensor model: z_hit + z_rand must be 1");
    }
    if (beam_stride < 1) throw ConfigError("sensor model: beam_stride must be >= 1");
}

ParticleSet initialize(const InitMode& mode, const OccupancyGrid& grid, int n, RandomStream& rng) {
    if (n < 1) throw DomainError("initialize: particle count must be >= 1");
    std::vector<std::size_t> free_cells;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.cells()[i] == Cell::Free) free_cells.push_back(i);
    }
    if (free_cells.empty()) throw DomainError("initialize: map has no free cells");

    ParticleSet ps;
    ps.particles.resize(static_cast<std::size_t>(n));
    const double w = 1.0 / n;
    if (std::holds_alternative<GlobalInit>(mode)) {
        for (auto& p : ps.particles) {
            const std::size_t idx = free_cells[rng.uniform_index(free_cells.size())];
            const int col = static_cast<int>(idx % static_cast<std::size_t>(grid.width()));
            const int row = static_cast<int>(idx / static_cast<std::size_t>(grid.width()));
            const Point2D g{col + rng.uniform(), row + rng.uniform()};
            const Point2D world = grid.grid_continuous_to_world(g);
            p.pose = {world.x, world.y, normalize_angle(rng.uniform(-kPi, kPi))};
            p.weight = w;
        }
        return ps;
    }

    const auto& around = std::get<AroundInit>(mode);
    constexpr int kMaxAttempts = 10000;
    for (auto& p : ps.particles) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            const Pose2D candidate{around.pose.x + around.sigma_xy * rng.normal(),
                                   around.pose.y + around.sigma_xy * rng.normal(),
                                   normalize_angle(around.pose.theta + around.sigma_theta * rng.normal())};
            const auto cell = grid.world_to_grid(position(candidate));
            if (cell && grid.at(*cell) == Cell::Free) {
                p.pose = candidate;
                placed = true;
            }
        }
        if (!placed) throw DomainError("initialize: no free cell found around the initial pose");
        p.weight = w;
    }
    return ps;
}

namespace detail {

Pose2D move_particle(const Pose2D& pose, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                     const ActuationNoise& noise, std::uint64_t key, std::uint64_t index) {
    RandomStream child = RandomStream::derive(key, index);
    const AckermannDrive noisy = apply_actuation_noise(cmd, noise, params, child);
    return step_kinematics(pose, noisy, dt, params);
}

SensorUpdateResult fold_log_likelihoods(const ParticleSet& ps, const std::vector<double>& log_likelihood) {
    const std::size_t n = ps.size();
    SensorUpdateResult out{ps, false};
    std::vector<double> logw(n);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = ps.particles[i].weight;
        logw[i] = (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) + log_likelihood[i];
        if (std::isnan(logw[i])) logw[i] = -std::numeric_limits<double>::infinity();
        max_log = std::max(max_log, logw[i]);
    }
    double sum = 0.0;
    if (std::isfinite(max_log)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::exp(logw[i] - max_log);
            out.particles.particles[i].weight = w;
            sum += w;
        }
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        out.degenerate = true;
        for (auto& p : out.particles.particles) p.weight = 1.0 / static_cast<double>(n);
        return out;
    }
    for (auto& p : out.particles.particles) p.weight /= sum;
    return out;
}

}  // namespace detail

ParticleSet motion_update(const ParticleSet& ps, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                          const ActuationNoise& noise, RandomStream& rng) {
    if (!(dt > 0.0)) throw DomainError("motion_update: dt must be > 0");
    ParticleSet out = ps;
    const std::uint64_t key = rng.next_u64();
    const auto n = static_cast<std::ptrdiff_t>(ps.size());
    Particle* dst = out.particles.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        dst[i].pose = detail::move_particle(dst[i].pose, cmd, dt, params, noise, key, static_cast<std::uint64_t>(i));
    }
    return out;
}

double beam_likelihood(double d, const SensorModelParams& smp, double range_max) noexcept {
    return smp.z_hit * std::exp(-(d * d) / (2.0 * smp.sigma_hit * smp.sigma_hit)) + smp.z_rand / range_max;
}

double scan_log_likelihood(const Pose2D& pose, const LaserScan& scan, const DistanceField& field,
                           const SensorModelParams& smp) {
    const Pose2D scanner = pose_compose(pose, scan.params.mount);
    const int count = static_cast<int>(scan.ranges.size());
    double total = 0.0;
    for (int i = 0; i < count; i += smp.beam_stride) {
        const double r = scan.ranges[static_cast<std::size_t>(i)];
        if (scan.is_no_return(r)) continue;
        const double a = scanner.theta + scan.params.beam_angle(i);
        const Point2D end{scanner.x + r * std::cos(a), scanner.y + r * std::sin(a)};
        total += std::log(beam_likelihood(field.lookup(end), smp, scan.params.range_max));
    }
    return total;
}

SensorUpdateResult sensor_update(const ParticleSet& ps, const LaserScan& scan, const DistanceField& field,
                                 const SensorModelParams& smp) {
    const auto n = static_cast<std::ptrdiff_t>(ps.size());
    std::vector<double> ll(ps.size());
    const Particle* src = ps.particles.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        ll[static_cast<std::size_t>(i)] = scan_log_likelihood(src[i].pose, scan, field, smp);
    }
    return detail::fold_log_likelihoods(ps, ll);
}

double effective_sample_size(const ParticleSet& ps) noexcept {
    double sum_sq = 0.0;
    for (const auto& p : ps.particles) sum_sq += p.weight * p.weight;
    return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

bool should_resample(const ParticleSet& ps, double threshold_ratio) noexcept {
    return effective_sample_size(ps) < threshold_ratio * static_cast<double>(ps.size());
}

ParticleSet resample_systematic(const ParticleSet& ps, double offset) {
    const std::size_t n = ps.size();
    ParticleSet out;
    out.particles.reserve(n);
    if (n == 0) return out;
    const double inv_n = 1.0 / static_cast<double>(n);
    double cumulative = ps.particles[0].weight;
    std::size_t i = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = (offset + static_cast<double>(k)) * inv_n;
        while (i + 1 < n && cumulative <= target) {
            ++i;
            cumulative += ps.particles[i].weight;
        }
        out.particles.push_back({ps.particles[i].pose, inv_n});
    }
    return out;
}

ParticleSet resample(const ParticleSet& ps, RandomStream& rng) { return resample_systematic(ps, rng.uniform()); }

Pose2D estimate(const ParticleSet& ps) {
    double x = 0.0, y = 0.0, s = 0.0, c = 0.0;
    for (const auto& p : ps.particles) {
        x += p.weight * p.pose.x;
        y += p.weight * p.pose.y;
        s += p.weight * std::sin(p.pose.theta);
        c += p.weight * std::cos(p.pose.theta);
    }
    return {x, y, normalize_angle(std::atan2(s, c))};
}

ParticleFilter::ParticleFilter(const OccupancyGrid& grid, MclConfig config, std::uint64_t seed)
    : grid_(&grid), config_(config), field_(build_distance_field(grid)), rng_(seed) {
    config_.sensor.validate();
    if (config_.particle_count < 1) throw ConfigError("localization: particle_count must be >= 1");
}

void ParticleFilter::initialize(const InitMode& mode) {
    particles_ = rcnav::initialize(mode, *grid_, config_.particle_count, rng_);
}

void ParticleFilter::predict(const AckermannDrive& cmd, double dt, const VehicleParams& params) {
    particles_ = motion_update(particles_, cmd, dt, params, config_.motion_noise, rng_);
}

bool ParticleFilter::correct(const LaserScan& scan) {
    auto result = sensor_update(particles_, scan, field_, config_.sensor);
    particles_ = std::move(result.particles);
    if (should_resample(particles_, config_.resample_threshold)) {
        particles_ = resample(particles_, rng_);
    }
    return result.degenerate;
}

}  // namespace rcnav
