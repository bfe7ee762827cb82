#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rcnav/core/random.hpp"
#include "rcnav/core/types.hpp"
#include "rcnav/localization/distance_field.hpp"
#include "rcnav/map/occupancy_grid.hpp"
#include "rcnav/sim/scan.hpp"
#include "rcnav/sim/simulator.hpp"

namespace rcnav {

struct Particle {
    Pose2D pose{};
    double weight{0.0};
};

struct ParticleSet {
    std::vector<Particle> particles;

    [[nodiscard]] std::size_t size() const noexcept { return particles.size(); }
    [[nodiscard]] double total_weight() const noexcept;
};

/// Likelihood-field sensor model parameters.
struct SensorModelParams {
    double sigma_hit{0.1};
    double z_hit{0.85};
    double z_rand{0.15};
    int beam_stride{24};

    void validate() const;
};

/// Uniform over Free cells with uniform heading.
struct GlobalInit {};
/// Gaussian about `pose`; draws landing outside Free cells are redrawn.
struct AroundInit {
    Pose2D pose{};
    double sigma_xy{0.5};
    double sigma_theta{0.2};
};
using InitMode = std::variant<GlobalInit, AroundInit>;

/// All weights 1/N. Throws DomainError when N < 1, when the map has no Free cell, or when
/// an around-draw cannot find a Free cell.
ParticleSet initialize(const InitMode& mode, const OccupancyGrid& grid, int n, RandomStream& rng);

/// Advances every particle by step_kinematics under an independent noisy (v, delta) draw.
/// Weights are unchanged. Parallel over particles with per-particle child streams.
ParticleSet motion_update(const ParticleSet& ps, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                          const ActuationNoise& noise, RandomStream& rng);

struct SensorUpdateResult {
    ParticleSet particles;
    /// Every particle's weight underflowed; weights were reset to uniform.
    bool degenerate{false};
};

/// z_hit * exp(-d^2 / (2 sigma_hit^2)) + z_rand / range_max for an endpoint at distance d.
double beam_likelihood(double d, const SensorModelParams& smp, double range_max) noexcept;

/// Log-likelihood of a scan for one pose: sum over every beam_stride-th beam, skipping no-returns.
double scan_log_likelihood(const Pose2D& pose, const LaserScan& scan, const DistanceField& field,
                           const SensorModelParams& smp);

/// Reweights by scan likelihood in log space (max-subtracted) and renormalizes to sum 1.
/// Parallel over particles; the normalizing sum is a serial pass.
SensorUpdateResult sensor_update(const ParticleSet& ps, const LaserScan& scan, const DistanceField& field,
                                 const SensorModelParams& smp);

/// 1 / sum(w^2).
double effective_sample_size(const ParticleSet& ps) noexcept;

/// True iff ESS < threshold_ratio * N.
bool should_resample(const ParticleSet& ps, double threshold_ratio = 0.5) noexcept;

/// Systematic resampling with strata offset u = offset / N, offset in [0, 1).
ParticleSet resample_systematic(const ParticleSet& ps, double offset);

/// Systematic resampling with one uniform draw from `rng`.
ParticleSet resample(const ParticleSet& ps, RandomStream& rng);

/// Weighted mean position and circular-mean heading.
Pose2D estimate(const ParticleSet& ps);

/// Stateful filter used by the navigation stack.
struct MclConfig {
    int particle_count{2000};
    SensorModelParams sensor{};
    ActuationNoise motion_noise{};
    double resample_threshold{0.5};
    double init_sigma_xy{0.5};
    double init_sigma_theta{0.2};
};

class ParticleFilter {
public:
    ParticleFilter(const OccupancyGrid& grid, MclConfig config, std::uint64_t seed);

    void initialize(const InitMode& mode);
    void predict(const AckermannDrive& cmd, double dt, const VehicleParams& params);
    /// Returns true if the update was degenerate.
    bool correct(const LaserScan& scan);

    [[nodiscard]] Pose2D estimate() const { return rcnav::estimate(particles_); }
    [[nodiscard]] const ParticleSet& particles() const noexcept { return particles_; }
    [[nodiscard]] const MclConfig& config() const noexcept { return config_; }
    [[nodiscard]] const DistanceField& field() const noexcept { return field_; }

private:
    const OccupancyGrid* grid_;
    MclConfig config_;
    DistanceField field_;
    RandomStream rng_;
    ParticleSet particles_;
};

}  // namespace rcnav

namespace rcnav::detail {
/// Per-particle motion kernel shared by the parallel loop and the serial reference.
Pose2D move_particle(const Pose2D& pose, const AckermannDrive& cmd, double dt, const VehicleParams& params,
                     const ActuationNoise& noise, std::uint64_t key, std::uint64_t index);
/// Folds per-particle log-likelihoods into the weights and renormalizes.
SensorUpdateResult fold_log_likelihoods(const ParticleSet& ps, const std::vector<double>& log_likelihood);
}  // namespace rcnav::detail
