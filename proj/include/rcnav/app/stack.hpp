#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "rcnav/app/config.hpp"
#include "rcnav/bus/bus.hpp"
#include "rcnav/bus/wire.hpp"
#include "rcnav/control/rollout.hpp"
#include "rcnav/esc/esc.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/sim/simulator.hpp"

namespace rcnav {

/// What happened in one loop iteration.
struct TickReport {
    double stamp{0.0};
    Pose2D truth{};
    Pose2D estimate{};
    MuxSelection selection;
    AckermannDrive applied{};
    bool safety_stop{false};
    /// min_ttc of this tick's scan against the command actually being executed.
    double executed_ttc{std::numeric_limits<double>::infinity()};
    bool collided{false};
    bool done{false};
};

/// The full loop: sim -> sensors -> localization -> control -> safety -> mux -> ESC -> sim.
///
/// Everything is driven by simulated time. Commands enter the mux through bus topics
/// (/teleop/cmd, /safety/cmd, /autonomous/cmd); state frames go out on /telemetry/state.
class Stack {
public:
    Stack(const OccupancyGrid& grid, StackConfig config, Bus& bus);

    /// Places the car and (re)initializes localization around `start`.
    void reset(const Pose2D& start);
    /// Straight line from the current estimate to `goal`.
    void set_goal(std::optional<Point2D> goal);
    /// Followed from the current estimate; segments are densified so the lookahead target stays near.
    void set_path(std::vector<Pose2D> path);
    /// Disables the autonomous controller (scripted or teleop-only runs).
    void set_autonomy(bool enabled) noexcept { autonomy_ = enabled; }

    TickReport tick();

    [[nodiscard]] const SimState& truth() const noexcept { return sim_.state(); }
    [[nodiscard]] Pose2D estimate() const noexcept { return estimate_; }
    [[nodiscard]] double time() const noexcept { return sim_.state().time; }
    [[nodiscard]] CommandMux& mux() noexcept { return mux_; }
    [[nodiscard]] const StackConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::optional<ParticleFilter>& filter() const noexcept { return filter_; }
    [[nodiscard]] const std::vector<Pose2D>& path() const noexcept { return path_; }
    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] const LaserScan& last_scan() const noexcept { return scan_; }

private:
    void on_command(const StampedCommand& cmd);
    void publish_state(const TickReport& report, const PlanResult* plan);

    const OccupancyGrid* grid_;
    StackConfig config_;
    Bus* bus_;
    VehicleParams planner_params_;
    Simulator sim_;
    RandomStream scan_rng_;
    std::optional<ParticleFilter> filter_;
    RolloutLibrary library_;
    CommandMux mux_;
    Esc esc_;

    Pose2D estimate_{};
    AckermannDrive last_applied_{};
    bool has_moved_{false};
    std::vector<Pose2D> path_;
    std::optional<Point2D> goal_;
    bool autonomy_{true};
    bool done_{false};
    LaserScan scan_;
    std::int64_t tick_count_{0};
    int snapshot_every_{1};

    std::mutex goal_mutex_;
    std::optional<Point2D> pending_goal_;

    std::vector<Bus::Subscription> subs_;
};

/// Appends newline-delimited records published on the telemetry and command-log topics.
class Recorder {
public:
    Recorder(Bus& bus, const std::filesystem::path& path);

private:
    void write(const std::shared_ptr<const std::string>& line);

    std::ofstream out_;
    std::mutex mutex_;
    std::vector<Bus::Subscription> subs_;
};

/// Republishes a record log onto the bus in file order. Returns the number of records.
/// With realtime_factor > 0 state records are paced by their stamps.
/// Throws LoadError on unreadable files or lines without a known "type".
std::size_t replay_log(Bus& bus, const std::filesystem::path& path, double realtime_factor = 0.0);

}  // namespace rcnav
