#include "rcnav/app/stack.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <thread>
#include <string>

#include "rcnav/control/waypoints.hpp"
#include "rcnav/core/errors.hpp"
#include "rcnav/safety/safety.hpp"
#include "rcnav/sim/collision.hpp"

namespace rcnav {
namespace {

using Line = std::shared_ptr<const std::string>;

VehicleParams inflate(VehicleParams p, double margin) {
    p.footprint_length += margin;
    p.footprint_width += margin;
    p.rear_overhang += margin / 2.0;  // keeps the footprint centre in place
    return p;
}

constexpr double kPathSpacing = 0.25;

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
    return RandomStream::derive(seed, stream).next_u64();
}

}  // namespace

Stack::Stack(const OccupancyGrid& grid, StackConfig config, Bus& bus)
    : grid_(&grid),
      config_((config.validate(), std::move(config))),
      bus_(&bus),
      planner_params_(inflate(config_.vehicle, config_.footprint_inflation)),
      sim_(grid, config_.vehicle, config_.sim_noise, sub_seed(config_.seed, 1), config_.actuation_delay_ticks),
      scan_rng_(sub_seed(config_.seed, 2)),
      library_(build_library(config_.vehicle, config_.rollouts)),
      mux_(config_.sources),
      esc_(mux_, config_.smoother, config_.actuator) {
    if (config_.localization_enabled) {
        filter_.emplace(grid, config_.localization, sub_seed(config_.seed, 3));
    }
    snapshot_every_ = std::max(1, static_cast<int>(std::lround(1.0 / (config_.telemetry.snapshot_rate * config_.dt))));

    for (const char* topic : {topics::kTeleopCmd, topics::kSafetyCmd, topics::kAutonomousCmd}) {
        subs_.push_back(bus.subscribe<StampedCommand>(topic, [this](const StampedCommand& c) { on_command(c); }));
    }
    subs_.push_back(bus.subscribe<Point2D>(topics::kGoal, [this](const Point2D& g) {
        std::lock_guard lock(goal_mutex_);
        pending_goal_ = g;
    }));
}

void Stack::on_command(const StampedCommand& cmd) {
    mux_.submit(cmd);
    if (bus_->subscriber_count(topics::kCommandLog) > 0) {
        bus_->publish(topics::kCommandLog, std::make_shared<const std::string>(wire::encode_command_record(cmd)));
    }
}

void Stack::reset(const Pose2D& start) {
    if (check_collision(*grid_, start, config_.vehicle)) {
        throw DomainError("start pose (" + std::to_string(start.x) + ", " + std::to_string(start.y) +
                          ") is in collision");
    }
    sim_.reset(start);
    if (filter_) {
        if (config_.init == InitKind::Global) {
            filter_->initialize(GlobalInit{});
        } else {
            filter_->initialize(
                AroundInit{start, config_.localization.init_sigma_xy, config_.localization.init_sigma_theta});
        }
        estimate_ = filter_->estimate();
    } else {
        estimate_ = start;
    }
    last_applied_ = {};
    has_moved_ = false;
    done_ = false;
    tick_count_ = 0;
}

void Stack::set_goal(std::optional<Point2D> goal) {
    if (goal) {
        set_path({{goal->x, goal->y, 0.0}});
    } else {
        set_path({});
    }
}

void Stack::set_path(std::vector<Pose2D> path) {
    goal_ = path.empty() ? std::nullopt : std::optional<Point2D>(position(path.back()));
    path_.clear();
    if (!path.empty()) {
        path.insert(path.begin(), estimate_);
        path_ = densify_path(path, kPathSpacing);
    }
    done_ = false;
}

TickReport Stack::tick() {
    {
        std::lock_guard lock(goal_mutex_);
        if (pending_goal_) {
            set_goal(pending_goal_);
            pending_goal_.reset();
        }
    }
    const double now = time();
    const double dt = config_.dt;
    bus_->publish(topics::kClock, now);

    scan_ = simulate_scan(*grid_, sim_.state().pose, config_.scan, scan_rng_, now);
    bus_->publish(topics::kScan, scan_);

    if (filter_) {
        if (has_moved_) filter_->predict(last_applied_, dt, config_.vehicle);
        filter_->correct(scan_);
        estimate_ = filter_->estimate();
    } else {
        estimate_ = sim_.state().pose;
    }

    PlanResult plan_result;
    bool planned = false;
    if (autonomy_ && !path_.empty()) {
        const auto target = next_waypoint(path_, estimate_, config_.lookahead, config_.goal_tolerance);
        done_ = done_ || target.done;
        AckermannDrive cmd{};
        if (!done_) {
            plan_result = plan(estimate_, target.goal, *grid_, library_, config_.cost, planner_params_);
            planned = true;
            cmd = plan_result.command;
        }
        bus_->publish(topics::kAutonomousCmd, StampedCommand{kAutonomousSource, now, cmd});
    }

    TickReport report;
    if (config_.safety_enabled) {
        const MuxSelection intent = mux_.select_without(now, kSafetySource);
        if (auto stop = safety_tick(scan_, intent.cmd, config_.safety)) {
            stop->stamp = now;
            bus_->publish(topics::kSafetyCmd, *stop);
            report.safety_stop = true;
        }
    }

    const EscOutput out = esc_.tick(now, dt);
    const AckermannDrive applied = from_actuator(out.actuator, esc_.calibration());
    report.executed_ttc = min_ttc(scan_, out.smoothed, config_.safety);
    bus_->publish(topics::kMuxOut, out.selection);

    sim_.tick(applied, dt);
    last_applied_ = applied;
    has_moved_ = true;

    report.stamp = time();
    report.truth = sim_.state().pose;
    report.estimate = estimate_;
    report.selection = out.selection;
    report.applied = applied;
    report.collided = sim_.state().collided;
    report.done = done_;

    if (tick_count_ % snapshot_every_ == 0 && bus_->subscriber_count(topics::kTelemetry) > 0) {
        publish_state(report, planned ? &plan_result : nullptr);
    }
    ++tick_count_;
    return report;
}

void Stack::publish_state(const TickReport& report, const PlanResult* plan) {
    wire::StateFrame f;
    f.stamp = report.stamp;
    f.pose = report.truth;
    f.estimate = report.estimate;
    f.scan_angle_min = scan_.params.angle_min;
    f.scan_angle_increment = scan_.params.angle_increment();
    f.ranges = scan_.ranges;
    if (filter_) f.particles = wire::decimate_particles(filter_->particles());
    if (plan) {
        for (const auto& r : plan->rollouts) {
            wire::StateFrame::RolloutLine line{r.cost, {}};
            for (std::size_t i = 0; i < r.poses.size(); i += 3) line.points.push_back(position(r.poses[i]));
            line.points.push_back(position(r.poses.back()));
            f.rollouts.push_back(std::move(line));
        }
    }
    f.active_source = report.selection.active_source.value_or("none");
    f.mux_cmd = report.selection.cmd;
    f.collided = report.collided;
    f.goal = goal_;
    f.done = report.done;
    bus_->publish(topics::kTelemetry, std::make_shared<const std::string>(wire::encode_state(f)));
}

Recorder::Recorder(Bus& bus, const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw LoadError(path.string() + ": cannot open record log for writing");
    for (const char* topic : {topics::kTelemetry, topics::kCommandLog}) {
        subs_.push_back(bus.subscribe<Line>(topic, [this](const Line& line) { write(line); }));
    }
}

void Recorder::write(const Line& line) {
    std::lock_guard lock(mutex_);
    out_ << *line << '\n';
    out_.flush();
}

std::size_t replay_log(Bus& bus, const std::filesystem::path& path, double realtime_factor) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path.string() + ": cannot open record log");
    std::string line;
    std::size_t count = 0;
    std::size_t lineno = 0;
    const auto wall_start = std::chrono::steady_clock::now();
    std::optional<double> first_stamp;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string type;
        double stamp = 0.0;
        try {
            const auto j = nlohmann::json::parse(line);
            type = j.at("type").get<std::string>();
            stamp = j.value("stamp", 0.0);
        } catch (const nlohmann::json::exception&) {
            throw LoadError(path.string() + ":" + std::to_string(lineno) + ": not a record");
        }
        auto payload = std::make_shared<const std::string>(line);
        if (type == "state") {
            if (realtime_factor > 0.0) {
                if (!first_stamp) first_stamp = stamp;
                std::this_thread::sleep_until(wall_start + std::chrono::duration<double>((stamp - *first_stamp) /
                                                                                          realtime_factor));
            }
            bus.publish(topics::kTelemetry, payload);
        } else if (type == "command") {
            bus.publish(topics::kCommandLog, payload);
        } else {
            throw LoadError(path.string() + ":" + std::to_string(lineno) + ": unknown record type '" + type + "'");
        }
        ++count;
    }
    return count;
}

}  // namespace rcnav
