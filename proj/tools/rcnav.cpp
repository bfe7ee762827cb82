// rcnav: simulator, navigation and localization benchmark entry points.
#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <sstream>

#include "rcnav/app/commands.hpp"
#include "rcnav/core/errors.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted.store(true); }

rcnav::Pose2D parse_pose(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 2 && v.size() != 3) throw rcnav::ConfigError("pose must be x,y[,theta]: '" + text + "'");
    return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

// Flags are collected here and laid over the config file after parsing.
struct Flags {
    std::string config;
    std::optional<std::string> map;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    bool headless{false};
    std::optional<std::string> serve;
    std::optional<std::string> record;
    std::optional<std::string> replay;
    std::optional<double> realtime_factor;
    bool fail_on_collision{false};
    std::optional<std::string> start;
    std::optional<std::string> goal;
    std::optional<std::string> waypoints;
    std::optional<double> timeout;
    std::optional<std::string> script;
    std::optional<std::string> seeds;
    std::optional<int> particles;
    bool verbose{false};
};

rcnav::StackConfig resolve(const Flags& f) {
    rcnav::StackConfig c;
    if (!f.config.empty()) rcnav::apply_config_file(c, f.config);
    if (f.map) c.map = *f.map;
    if (f.seed) c.seed = *f.seed;
    if (f.duration) c.duration = *f.duration;
    if (f.headless) c.headless = true;
    if (f.serve) c.serve = *f.serve;
    if (f.record) c.record = *f.record;
    if (f.replay) c.replay = *f.replay;
    if (f.realtime_factor) c.realtime_factor = *f.realtime_factor;
    if (f.fail_on_collision) c.fail_on_collision = true;
    if (f.start) c.start = parse_pose(*f.start);
    if (f.goal) {
        const auto g = parse_pose(*f.goal);
        c.goal = rcnav::Point2D{g.x, g.y};
    }
    if (f.waypoints) c.waypoints = *f.waypoints;
    if (f.timeout) c.timeout = *f.timeout;
    if (f.script) c.script = *f.script;
    if (f.seeds) c.seeds = *f.seeds;
    if (f.particles) c.localization.particle_count = *f.particles;
    if (c.map.empty()) throw rcnav::ConfigError("a map is required (--map or run.map)");
    return c;
}

void common_options(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "YAML config file")->check(CLI::ExistingFile);
    app->add_option("--map", f.map, "Map YAML");
    app->add_option("--seed", f.seed, "Random seed");
    app->add_option("--start", f.start, "Start pose x,y[,theta]");
    app->add_flag("-v,--verbose", f.verbose, "Debug logging");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ackermann racecar simulator and navigation stack"};
    app.require_subcommand(1);
    Flags f;

    auto* sim = app.add_subcommand("sim", "Run the simulated car with telemetry");
    common_options(sim, f);
    sim->add_option("--duration", f.duration, "Simulated seconds to run");
    sim->add_flag("--headless", f.headless, "Do not start the telemetry server");
    sim->add_option("--serve", f.serve, "Telemetry endpoint host:port");
    sim->add_option("--record", f.record, "Write a record log");
    sim->add_option("--replay", f.replay, "Republish a record log instead of simulating");
    sim->add_option("--realtime-factor", f.realtime_factor, "Sim seconds per wall second (0 = unpaced)");
    sim->add_flag("--fail-on-collision", f.fail_on_collision, "Exit nonzero if the car collided");
    sim->add_option("--goal", f.goal, "Goal x,y");
    sim->add_option("--waypoints", f.waypoints, "Waypoint file");

    auto* nav = app.add_subcommand("navigate", "Drive autonomously to a goal and report");
    common_options(nav, f);
    nav->add_option("--goal", f.goal, "Goal x,y");
    nav->add_option("--waypoints", f.waypoints, "Waypoint file");
    nav->add_option("--timeout", f.timeout, "Simulated seconds before giving up");
    nav->add_option("--record", f.record, "Write a record log");

    auto* bench = app.add_subcommand("localize-bench", "Track a scripted drive with the particle filter");
    common_options(bench, f);
    bench->add_option("--script", f.script, "Trajectory script (duration speed steering per line)");
    bench->add_option("--seeds", f.seeds, "Seed list, e.g. 1-20 or 1,4,9");
    bench->add_option("--particles", f.particles, "Particle count");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(f.verbose ? spdlog::level::debug : spdlog::level::warn);

    rcnav::StackConfig config;
    try {
        config = resolve(f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rcnav::kExitLoadError;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    if (sim->parsed()) return rcnav::cmd_sim(config, std::cout, std::cerr, &g_interrupted);
    if (nav->parsed()) return rcnav::cmd_navigate(config, std::cout, std::cerr);
    return rcnav::cmd_localize_bench(config, std::cout, std::cerr);
}
