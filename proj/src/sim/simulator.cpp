#include "rcnav/sim/simulator.hpp"

#include "rcnav/core/errors.hpp"
#include "rcnav/sim/collision.hpp"
#include "rcnav/sim/kinematics.hpp"

namespace rcnav {

AckermannDrive apply_actuation_noise(const AckermannDrive& cmd, const ActuationNoise& noise,
                                     const VehicleParams& params, RandomStream& rng) {
    const double n_speed = rng.normal();
    const double n_steer = rng.normal();
    const AckermannDrive noisy{cmd.speed * (1.0 + noise.speed_sigma * n_speed),
                               cmd.steering_angle + noise.steering_sigma * n_steer};
    return clamp_to_limits(noisy, params);
}

SimState sim_tick(const SimState& state, const AckermannDrive& cmd, double dt, const OccupancyGrid& grid,
                  const VehicleParams& params, const ActuationNoise& noise, RandomStream& rng) {
    if (!(dt > 0.0)) throw DomainError("sim_tick: dt must be > 0");
    SimState next = state;
    const AckermannDrive applied = apply_actuation_noise(cmd, noise, params, rng);
    const Pose2D moved = step_kinematics(state.pose, applied, dt, params);
    if (check_collision(grid, moved, params)) {
        next.collided = true;
    } else {
        next.pose = moved;
    }
    next.commanded = cmd;
    next.time = state.time + dt;
    return next;
}

Simulator::Simulator(const OccupancyGrid& grid, VehicleParams params, ActuationNoise noise, std::uint64_t seed,
                     int actuation_delay_ticks)
    : grid_(&grid), params_(params), noise_(noise), rng_(seed), delay_ticks_(actuation_delay_ticks) {
    params_.validate();
    if (delay_ticks_ < 0 || delay_ticks_ > 1) {
        throw ConfigError("simulator: actuation_delay_ticks must be 0 or 1");
    }
}

void Simulator::reset(const Pose2D& pose, double time) {
    state_ = SimState{pose, {}, time, false};
    pending_ = {};
}

const SimState& Simulator::tick(const AckermannDrive& cmd, double dt) {
    AckermannDrive apply = cmd;
    if (delay_ticks_ == 1) {
        apply = pending_;
        pending_ = cmd;
    }
    state_ = sim_tick(state_, apply, dt, *grid_, params_, noise_, rng_);
    return state_;
}

}  // namespace rcnav
