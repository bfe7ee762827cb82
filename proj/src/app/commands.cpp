#include "rcnav/app/commands.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "rcnav/app/stack.hpp"
#include "rcnav/bus/telemetry_server.hpp"
#include "rcnav/control/waypoints.hpp"
#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"
#include "rcnav/localization/distance_field.hpp"
#include "rcnav/map/map_io.hpp"
#include "rcnav/sim/collision.hpp"

namespace rcnav {
namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
    return RandomStream::derive(seed, stream).next_u64();
}

}  // namespace

std::string format_report(const NavigationReport& r) {
    std::ostringstream os;
    os << std::boolalpha << std::fixed << std::setprecision(4);
    os << "success: " << r.success << '\n'
       << "reached: " << r.reached << '\n'
       << "collided: " << r.collided << '\n'
       << "timed_out: " << r.timed_out << '\n'
       << "elapsed: " << r.elapsed << '\n'
       << "path_length: " << r.path_length << '\n'
       << "min_clearance: " << r.min_clearance << '\n'
       << "localization_rmse: " << r.localization_rmse << '\n';
    return os.str();
}

NavigationReport run_navigation(const OccupancyGrid& grid, const StackConfig& config, const Pose2D& start,
                                const std::vector<Pose2D>& path) {
    Bus bus;
    Stack stack(grid, config, bus);
    stack.reset(start);
    stack.set_path(path);

    NavigationReport r;
    r.min_clearance = footprint_clearance(grid, start, config.vehicle);
    Pose2D prev = start;
    double sq_err = 0.0;
    std::size_t samples = 0;
    while (stack.time() < config.timeout - 1e-9) {
        const TickReport t = stack.tick();
        const double e = distance(position(t.estimate), position(prev));
        sq_err += e * e;
        ++samples;
        r.path_length += distance(position(t.truth), position(prev));
        r.min_clearance = std::min(r.min_clearance, footprint_clearance(grid, t.truth, config.vehicle));
        prev = t.truth;
        if (t.collided) {
            r.collided = true;
            break;
        }
        if (t.done) {
            r.reached = true;
            break;
        }
    }
    r.elapsed = stack.time();
    r.timed_out = !r.reached && !r.collided;
    r.localization_rmse = samples ? std::sqrt(sq_err / static_cast<double>(samples)) : 0.0;
    r.success = r.reached && !r.collided;
    return r;
}

BenchRow run_localize_bench(const OccupancyGrid& grid, StackConfig config, const Pose2D& start,
                            const std::vector<ScriptSegment>& script, std::uint64_t seed) {
    config.seed = seed;
    config.validate();
    Simulator sim(grid, config.vehicle, config.sim_noise, sub_seed(seed, 1), config.actuation_delay_ticks);
    sim.reset(start);
    RandomStream scan_rng(sub_seed(seed, 2));
    ParticleFilter filter(grid, config.localization, sub_seed(seed, 3));
    if (config.init == InitKind::Global) {
        filter.initialize(GlobalInit{});
    } else {
        filter.initialize(AroundInit{start, config.localization.init_sigma_xy, config.localization.init_sigma_theta});
    }

    BenchRow row;
    row.seed = seed;
    double pos_sum = 0.0;
    double head_sum = 0.0;
    std::size_t samples = 0;
    const double total = script_duration(script);
    AckermannDrive prev_cmd{};
    bool moved = false;
    for (;;) {
        const double now = sim.state().time;
        if (moved) filter.predict(prev_cmd, config.dt, config.vehicle);
        filter.correct(simulate_scan(grid, sim.state().pose, config.scan, scan_rng, now));
        const Pose2D est = filter.estimate();
        const Pose2D& truth = sim.state().pose;
        row.final_position_error = distance(position(est), position(truth));
        row.final_heading_error = std::abs(angle_diff(est.theta, truth.theta));
        pos_sum += row.final_position_error;
        head_sum += row.final_heading_error;
        ++samples;
        if (now >= total - 1e-9) break;
        prev_cmd = script_command(script, now);
        sim.tick(prev_cmd, config.dt);
        moved = true;
    }
    row.mean_position_error = pos_sum / static_cast<double>(samples);
    row.mean_heading_error = head_sum / static_cast<double>(samples);
    return row;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << std::setprecision(6) << std::fixed;
    os << "seed,final_position_error,mean_position_error,final_heading_error,mean_heading_error\n";
    for (const auto& r : rows) {
        os << r.seed << ',' << r.final_position_error << ',' << r.mean_position_error << ','
           << r.final_heading_error << ',' << r.mean_heading_error << '\n';
    }
    return os.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    auto number = [&](const std::string& s) -> std::uint64_t {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError("bad seed list '" + text + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(number(item));
            continue;
        }
        const auto lo = number(item.substr(0, dash));
        const auto hi = number(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("bad seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
    if (out.empty()) throw ConfigError("empty seed list");
    return out;
}

std::vector<ScriptSegment> load_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(path.string() + ": cannot open trajectory script");
    std::vector<ScriptSegment> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        ScriptSegment seg;
        if (!(ls >> seg.duration)) continue;
        std::string extra;
        if (!(ls >> seg.speed >> seg.steering) || (ls >> extra) || !(seg.duration > 0.0) ||
            !std::isfinite(seg.speed) || !std::isfinite(seg.steering)) {
            throw LoadError(path.string() + ":" + std::to_string(lineno) + ": expected 'duration speed steering'");
        }
        out.push_back(seg);
    }
    if (out.empty()) throw LoadError(path.string() + ": script has no segments");
    return out;
}

Pose2D default_start(const OccupancyGrid& grid, const VehicleParams& params) {
    const DistanceField field = build_distance_field(grid);
    double best = -1.0;
    Point2D at{};
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            const double d = field.at(c, r);
            if (grid.at(c, r) == Cell::Free && std::isfinite(d) && d > best) {
                best = d;
                at = grid.grid_to_world({c, r});
            }
        }
    }
    if (best < 0.0) throw DomainError("map has no free cell for a start pose");
    return {at.x - params.footprint_center_offset(), at.y, 0.0};
}

std::vector<Pose2D> configured_path(const StackConfig& config) {
    if (config.waypoints) return load_waypoints(config.waypoints->string());
    if (config.goal) return {{config.goal->x, config.goal->y, 0.0}};
    return {};
}

int cmd_sim(const StackConfig& config, std::ostream& out, std::ostream& err, const std::atomic<bool>* interrupted) {
    auto stop_requested = [&] { return interrupted && interrupted->load(); };
    try {
        config.validate();
        const OccupancyGrid grid = load_map(config.map);
        Bus bus;

        std::optional<TelemetryServer> server;
        if (!config.headless) {
            TelemetryConfig tc = config.telemetry;
            tc.limits = config.vehicle;
            if (config.serve) std::tie(tc.address, tc.port) = parse_endpoint(*config.serve);
            server.emplace(bus, wire::encode_map_meta(grid), tc);
            server->start();
            err << "telemetry: ws://" << tc.address << ':' << server->port() << '\n';
        }
        std::optional<Recorder> recorder;
        if (config.record) recorder.emplace(bus, *config.record);

        if (config.replay) {
            const auto n = replay_log(bus, *config.replay, config.headless ? 0.0 : config.realtime_factor);
            out << "replayed " << n << " records\n";
            return kExitOk;
        }

        Stack stack(grid, config, bus);
        stack.reset(config.start ? *config.start : default_start(grid, config.vehicle));
        stack.set_path(configured_path(config));

        const auto wall_start = std::chrono::steady_clock::now();
        while (stack.time() < config.duration - 1e-9 && !stop_requested()) {
            stack.tick();
            if (config.realtime_factor > 0.0) {
                std::this_thread::sleep_until(wall_start +
                                              std::chrono::duration<double>(stack.time() / config.realtime_factor));
            }
        }
        if (server) server->stop();

        const bool collided = stack.truth().collided;
        out << std::fixed << std::setprecision(4) << "time: " << stack.time() << '\n'
            << "collided: " << (collided ? "true" : "false") << '\n';
        return config.fail_on_collision && collided ? kExitFailure : kExitOk;
    } catch (const LoadError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_navigate(const StackConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const OccupancyGrid grid = load_map(config.map);
        const auto path = configured_path(config);
        if (path.empty()) throw ConfigError("navigate needs --goal or --waypoints");
        const Pose2D start = config.start ? *config.start : default_start(grid, config.vehicle);
        if (check_collision(grid, start, config.vehicle)) {
            throw ConfigError("start pose is in collision");
        }
        const NavigationReport r = run_navigation(grid, config, start, path);
        out << format_report(r);
        return r.success ? kExitOk : kExitFailure;
    } catch (const LoadError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_localize_bench(const StackConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const OccupancyGrid grid = load_map(config.map);
        const auto script = config.script ? load_script(*config.script)
                                          : figure_eight_script(config.vehicle.wheelbase, 1.0, 0.3, 30.0);
        const auto seeds = parse_seed_list(config.seeds);
        const Pose2D start = config.start ? *config.start : default_start(grid, config.vehicle);
        std::vector<BenchRow> rows;
        rows.reserve(seeds.size());
        for (auto seed : seeds) rows.push_back(run_localize_bench(grid, config, start, script, seed));
        out << format_bench_table(rows);
        return kExitOk;
    } catch (const LoadError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitLoadError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace rcnav
