#pragma once

#include <optional>

#include "rcnav/core/random.hpp"
#include "rcnav/core/types.hpp"
#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

/// Actuation noise: speed is scaled by N(1, speed_sigma), steering gets N(0, steering_sigma) added.
struct ActuationNoise {
    double speed_sigma{0.05};
    double steering_sigma{0.02};
};

struct SimState {
    Pose2D pose{};
    AckermannDrive commanded{};
    double time{0.0};
    /// Bump-sensor latch; stays set until reset_collision().
    bool collided{false};
};

/// Applies one noisy actuation draw to a command and clamps it to the vehicle limits.
/// Always consumes exactly two normals from `rng`.
AckermannDrive apply_actuation_noise(const AckermannDrive& cmd, const ActuationNoise& noise,
                                     const VehicleParams& params, RandomStream& rng);

/// One fixed step: noisy actuation, exact kinematics, bump latch. A step that would put the
/// footprint into a blocking cell is discarded (the car stalls at the previous pose) and
/// latches `collided`. Throws DomainError if dt <= 0.
SimState sim_tick(const SimState& state, const AckermannDrive& cmd, double dt, const OccupancyGrid& grid,
                  const VehicleParams& params, const ActuationNoise& noise, RandomStream& rng);

/// Owns a SimState and an optional one-tick actuation delay.
class Simulator {
public:
    Simulator(const OccupancyGrid& grid, VehicleParams params, ActuationNoise noise, std::uint64_t seed,
              int actuation_delay_ticks = 0);

    void reset(const Pose2D& pose, double time = 0.0);
    void reset_collision() noexcept { state_.collided = false; }

    /// Advances by dt applying `cmd` (or the previous tick's command when delayed).
    const SimState& tick(const AckermannDrive& cmd, double dt);

    [[nodiscard]] const SimState& state() const noexcept { return state_; }
    [[nodiscard]] const OccupancyGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const VehicleParams& params() const noexcept { return params_; }

private:
    const OccupancyGrid* grid_;
    VehicleParams params_;
    ActuationNoise noise_;
    RandomStream rng_;
    int delay_ticks_;
    AckermannDrive pending_{};
    SimState state_{};
};

}  // namespace rcnav
