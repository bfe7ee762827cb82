#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcnav/core/types.hpp"
#include "rcnav/map/occupancy_grid.hpp"

namespace rcnav {

struct RolloutLibraryConfig {
    int candidates{31};
    int horizon{30};
    double dt{0.1};
    double v_nominal{1.0};
};

/// Static library of constant-steering candidates, ordered from most negative (right) to
/// most positive (left) steering. The middle candidate is exactly zero.
struct RolloutLibrary {
    RolloutLibraryConfig config;
    std::vector<std::vector<double>> steering;  // [candidate][step]

    [[nodiscard]] int size() const noexcept { return static_cast<int>(steering.size()); }
    /// Controls of one candidate at the nominal speed.
    [[nodiscard]] std::vector<AckermannDrive> controls(int candidate) const;
};

/// Throws ConfigError unless candidates is odd and >= 3, horizon >= 1, dt > 0.
RolloutLibrary build_library(const VehicleParams& params, const RolloutLibraryConfig& config);

struct CostWeights {
    double w_goal{1.0};
    double w_collision{1e4};
    double w_steer{0.2};
    /// Lethal collisions truncate the rollout at the first colliding pose.
    /// Non-lethal ones add the penalty once and keep integrating.
    bool collision_lethal{true};

    void validate() const;
};

struct Rollout {
    std::vector<Pose2D> poses;              // horizon + 1
    std::vector<AckermannDrive> controls;   // horizon
    double cost{0.0};
    double goal_cost{0.0};
    double steer_cost{0.0};
    double collision_cost{0.0};
    /// Index t of the first step whose resulting pose poses[t + 1] collides.
    std::optional<int> collision_step;
};

/// Forward-simulates `controls` from `start` with exact kinematics and scores
///   w_goal * |poses[T].xy - goal.xy| + w_steer * sum |delta_t| + collision term.
/// With lethal collisions the poses after the first colliding one repeat it.
Rollout evaluate_rollout(const Pose2D& start, std::span<const AckermannDrive> controls, double dt,
                         const OccupancyGrid& grid, const Pose2D& goal, const CostWeights& weights,
                         const VehicleParams& params);

struct PlanResult {
    AckermannDrive command{};
    std::vector<Rollout> rollouts;
    int best{-1};
    /// Every candidate collides on its first step; the command is a stop.
    bool blocked{false};
};

/// Selection order: lowest cost, then smallest |first steering|, then lowest index.
/// Candidates that collide on their first step are skipped unless all of them do.
/// Returns -1 for an empty set.
int select_rollout(const std::vector<Rollout>& rollouts);

/// Evaluates all candidates (in parallel) and returns the first control of the best one,
/// or a stop when every candidate collides on its first step.
PlanResult plan(const Pose2D& estimate, const Pose2D& goal, const OccupancyGrid& grid, const RolloutLibrary& lib,
                const CostWeights& weights, const VehicleParams& params);

inline AckermannDrive plan_step(const Pose2D& estimate, const Pose2D& goal, const OccupancyGrid& grid,
                                const RolloutLibrary& lib, const CostWeights& weights, const VehicleParams& params) {
    return plan(estimate, goal, grid, lib, weights, params).command;
}

namespace detail {
PlanResult finish_plan(std::vector<Rollout> rollouts);
}

}  // namespace rcnav
