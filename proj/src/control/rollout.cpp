#include "rcnav/control/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcnav/core/errors.hpp"
#include "rcnav/sim/collision.hpp"
#include "rcnav/sim/kinematics.hpp"

namespace rcnav {

std::vector<AckermannDrive> RolloutLibrary::controls(int candidate) const {
    const auto& seq = steering.at(static_cast<std::size_t>(candidate));
    std::vector<AckermannDrive> out;
    out.reserve(seq.size());
    for (const double delta : seq) out.push_back({config.v_nominal, delta});
    return out;
}

RolloutLibrary build_library(const VehicleParams& params, const RolloutLibraryConfig& config) {
    if (config.candidates < 3 || config.candidates % 2 == 0) {
        throw ConfigError("rollout library: candidate count must be odd and >= 3, got " +
                          std::to_string(config.candidates));
    }
    if (config.horizon < 1) throw ConfigError("rollout library: horizon must be >= 1");
    if (!(config.dt > 0.0)) throw ConfigError("rollout library: dt must be > 0");
    RolloutLibrary lib{config, {}};
    const int k = config.candidates;
    const int half = (k - 1) / 2;
    lib.steering.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        // Numerator is exactly zero for the middle candidate.
        const double delta = params.steering_limit * static_cast<double>(i - half) / static_cast<double>(half);
        lib.steering.emplace_back(static_cast<std::size_t>(config.horizon), delta);
    }
    return lib;
}

void CostWeights::validate() const {
    if (w_goal < 0.0 || w_collision < 0.0 || w_steer < 0.0) throw ConfigError("cost weights must be >= 0");
}

Rollout evaluate_rollout(const Pose2D& start, std::span<const AckermannDrive> controls, double dt,
                         const OccupancyGrid& grid, const Pose2D& goal, const CostWeights& weights,
                         const VehicleParams& params) {
    Rollout r;
    r.controls.assign(controls.begin(), controls.end());
    r.poses.reserve(controls.size() + 1);
    r.poses.push_back(start);
    double steer_sum = 0.0;
    bool frozen = false;
    for (std::size_t t = 0; t < controls.size(); ++t) {
        steer_sum += std::abs(controls[t].steering_angle);
        if (frozen) {
            r.poses.push_back(r.poses.back());
            continue;
        }
        const Pose2D next = step_kinematics(r.poses.back(), controls[t], dt, params);
        r.poses.push_back(next);
        if (!r.collision_step && check_collision(grid, next, params)) {
            r.collision_step = static_cast<int>(t);
            frozen = weights.collision_lethal;
        }
    }
    const Pose2D& last = r.poses.back();
    r.goal_cost = weights.w_goal * std::hypot(last.x - goal.x, last.y - goal.y);
    r.steer_cost = weights.w_steer * steer_sum;
    r.collision_cost = r.collision_step ? weights.w_collision : 0.0;
    r.cost = r.goal_cost + r.steer_cost + r.collision_cost;
    return r;
}

int select_rollout(const std::vector<Rollout>& rollouts) {
    auto immediate = [](const Rollout& r) { return r.collision_step && *r.collision_step == 0; };
    const bool any_viable = std::any_of(rollouts.begin(), rollouts.end(), [&](const Rollout& r) { return !immediate(r); });
    int best = -1;
    for (int i = 0; i < static_cast<int>(rollouts.size()); ++i) {
        const Rollout& a = rollouts[static_cast<std::size_t>(i)];
        if (any_viable && immediate(a)) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const Rollout& b = rollouts[static_cast<std::size_t>(best)];
        const double sa = a.controls.empty() ? 0.0 : std::abs(a.controls.front().steering_angle);
        const double sb = b.controls.empty() ? 0.0 : std::abs(b.controls.front().steering_angle);
        if (a.cost < b.cost || (a.cost == b.cost && sa < sb)) best = i;
    }
    return best;
}

namespace detail {

PlanResult finish_plan(std::vector<Rollout> rollouts) {
    PlanResult result;
    result.rollouts = std::move(rollouts);
    bool all_blocked = !result.rollouts.empty();
    for (const auto& r : result.rollouts) {
        if (!(r.collision_step && *r.collision_step == 0)) {
            all_blocked = false;
            break;
        }
    }
    result.best = select_rollout(result.rollouts);
    if (all_blocked || result.best < 0) {
        result.blocked = all_blocked;
        result.command = {};
        return result;
    }
    result.command = result.rollouts[static_cast<std::size_t>(result.best)].controls.front();
    return result;
}

}  // namespace detail

PlanResult plan(const Pose2D& estimate, const Pose2D& goal, const OccupancyGrid& grid, const RolloutLibrary& lib,
                const CostWeights& weights, const VehicleParams& params) {
    const int k = lib.size();
    std::vector<Rollout> rollouts(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < k; ++i) {
        const auto controls = lib.controls(i);
        rollouts[static_cast<std::size_t>(i)] =
            evaluate_rollout(estimate, controls, lib.config.dt, grid, goal, weights, params);
    }
    return detail::finish_plan(std::move(rollouts));
}

}  // namespace rcnav
