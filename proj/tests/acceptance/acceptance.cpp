// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "rcnav/app/commands.hpp"
#include "rcnav/app/scenarios.hpp"
#include "rcnav/app/stack.hpp"
#include "rcnav/control/rollout.hpp"
#include "rcnav/core/angle.hpp"
#include "rcnav/localization/distance_field.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/map/map_io.hpp"
#include "rcnav/sim/collision.hpp"
#include "rcnav/sim/kinematics.hpp"
#include "rcnav/sim/raycast.hpp"

using namespace rcnav;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = RCNAV_SOURCE_DIR;

struct Outcome {
    bool pass{false};
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

double pose_error(const Pose2D& a, const Pose2D& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(angle_diff(a.theta, b.theta))});
}

Outcome integrator() {
    const VehicleParams vp;
    RandomStream rng(1001);
    double split = 0.0, rk = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Pose2D p{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-kPi, kPi)};
        const AckermannDrive c{rng.uniform(-vp.speed_limit, vp.speed_limit),
                               rng.uniform(-vp.steering_limit, vp.steering_limit)};
        const double dt = rng.uniform(0.01, 0.5);
        const int n = 2 + static_cast<int>(rng.uniform_index(15));
        const Pose2D whole = step_kinematics(p, c, dt, vp);
        Pose2D q = p;
        for (int k = 0; k < n; ++k) q = step_kinematics(q, c, dt / n, vp);
        split = std::max(split, pose_error(whole, q));
        rk = std::max(rk, pose_error(whole, oracle::rk4(p, c.speed, c.steering_angle, vp.wheelbase, dt, 200)));
    }
    return {split <= 1e-9 && rk <= 1e-6, "max split error " + fmt(split) + ", max RK4 error " + fmt(rk)};
}

Outcome raycasting() {
    RandomStream rng(1002);
    int refined = 0;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double res = rng.uniform(0.02, 0.1);
        const Pose2D origin{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
        auto g = oracle::random_grid(100, 100, res, rng.uniform(0.005, 0.08), rng, origin);
        for (int i = 0; i < 500; ++i) {
            const auto c = g.grid_to_world(
                {static_cast<int>(rng.uniform_index(100)), static_cast<int>(rng.uniform_index(100))});
            const Point2D o{c.x + rng.uniform(-0.45, 0.45) * res, c.y + rng.uniform(-0.45, 0.45) * res};
            const double bearing = rng.uniform(-kPi, kPi);
            const double range = 100 * res;
            const bool unknown_blocks = i % 2 == 0;
            const double got = raycast(g, o, bearing, range, unknown_blocks);
            double want = oracle::march_ray(g, o, bearing, range, unknown_blocks, res / 100);
            if (std::abs(got - want) > res) {
                // A corner clipped for less than one marching step; settle it with a finer march.
                want = oracle::march_ray(g, o, bearing, range, unknown_blocks, res / 1e5);
                ++refined;
            }
            worst = std::max(worst, std::abs(got - want) / res);
        }
    }
    return {worst <= 1.0, "worst error " + fmt(worst) + " cells, " + std::to_string(refined) +
                              " of 10000 rays re-marched at res/1e5"};
}

Outcome distance_field() {
    RandomStream rng(1003);
    int exact = 0;
    for (int k = 0; k < 20; ++k) {
        const auto g = oracle::random_grid(50, 50, rng.uniform(0.02, 0.2), rng.uniform(0.002, 0.3), rng);
        if (build_distance_field(g).values() == oracle::brute_distance_field(g)) ++exact;
    }
    return {exact == 20, std::to_string(exact) + "/20 grids exact"};
}

Outcome resampler() {
    const std::vector<std::vector<double>> cases{{0.5, 0.3, 0.2}, {0.05, 0.6, 0.01, 0.34}, {0.1, 0.1, 0.1, 0.7, 0.0}};
    RandomStream rng(1004);
    const int trials = 100000;
    double worst = 0.0;
    bool bracket = true;
    for (const auto& w : cases) {
        const std::size_t n = w.size();
        ParticleSet ps;
        for (std::size_t i = 0; i < n; ++i) ps.particles.push_back({{static_cast<double>(i), 0, 0}, w[i]});
        std::vector<double> total(n, 0.0);
        for (int t = 0; t < trials; ++t) {
            std::vector<int> c(n, 0);
            for (const auto& p : resample(ps, rng).particles) ++c[static_cast<std::size_t>(p.pose.x)];
            for (std::size_t i = 0; i < n; ++i) {
                const double e = static_cast<double>(n) * w[i];
                if (c[i] < std::floor(e - 1e-9) || c[i] > std::ceil(e + 1e-9)) bracket = false;
                total[i] += c[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(total[i] / trials - static_cast<double>(n) * w[i]));
    }
    return {bracket && worst <= 0.02,
            "max mean copy deviation " + fmt(worst) + (bracket ? ", bracket held" : ", bracket violated")};
}

Outcome localization() {
    const auto sc = room_scenario();
    const StackConfig config;
    const auto script = figure_eight_script(config.vehicle.wheelbase, 1.0, 0.3, 30.0);
    int good = 0;
    double worst_pos = 0.0, worst_head = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto row = run_localize_bench(sc.grid, config, sc.start, script, seed);
        if (row.final_position_error < 0.15 && row.final_heading_error < 0.1) ++good;
        worst_pos = std::max(worst_pos, row.final_position_error);
        worst_head = std::max(worst_head, row.final_heading_error);
    }
    return {good >= 18, std::to_string(good) + "/20 seeds converged, worst final error " + fmt(worst_pos) + " m / " +
                            fmt(worst_head) + " rad"};
}

Outcome selection() {
    const VehicleParams vp;
    const auto lib = build_library(vp, {});
    RandomStream rng(1006);
    int agree = 0;
    for (int i = 0; i < 100; ++i) {
        const auto sc = oracle::random_scene(rng, vp);
        const CostWeights w{rng.uniform(0.5, 2.0), 1e4, rng.uniform(0.0, 0.3), true};
        const auto res = plan(sc.start, sc.goal, sc.grid, lib, w, vp);
        if (res.best == oracle::argmin(oracle::rollout_costs(sc.start, sc.goal, sc.grid, lib, w, vp))) ++agree;
    }
    return {agree == 100, std::to_string(agree) + "/100 instances agree"};
}

Outcome navigation() {
    const auto sc = obstacle_corridor_scenario();
    int good = 0;
    double slowest = 0.0, tightest = INFINITY;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        StackConfig config;
        config.seed = seed;
        config.timeout = 60.0;
        const auto r = run_navigation(sc.grid, config, sc.start, {{sc.goal.x, sc.goal.y, 0.0}});
        if (r.success && r.min_clearance > 0.0) ++good;
        slowest = std::max(slowest, r.elapsed);
        tightest = std::min(tightest, r.min_clearance);
    }
    return {good >= 19, std::to_string(good) + "/20 seeds reached the goal, slowest " + fmt(slowest) +
                            " s, min clearance " + fmt(tightest) + " m"};
}

struct WallRun {
    double min_ttc{INFINITY};
    bool collided{false};
    bool halted{false};
    bool safety_seen{false};
};

// Autonomy off; the autonomous source is fed a fixed command every tick.
WallRun drive_at_wall(const OccupancyGrid& grid, const Pose2D& start, const AckermannDrive& cmd, std::uint64_t seed,
                      double seconds) {
    StackConfig config;
    config.seed = seed;
    config.localization_enabled = false;
    Bus bus;
    Stack stack(grid, config, bus);
    stack.reset(start);
    stack.set_autonomy(false);
    WallRun out;
    while (stack.time() < seconds) {
        bus.publish(topics::kAutonomousCmd, StampedCommand{kAutonomousSource, stack.time(), cmd});
        const auto t = stack.tick();
        out.min_ttc = std::min(out.min_ttc, t.executed_ttc);
        out.collided = out.collided || t.collided;
        out.safety_seen = out.safety_seen || (t.selection.active_source && *t.selection.active_source == "safety");
        out.halted = t.applied.speed == 0.0;
    }
    return out;
}

Outcome safety_loop() {
    const double floor = SafetyParams{}.ttc_threshold / 2;
    const auto box = walled_box(10.0, 4.0);

    // Scripted run: full speed straight at the far wall.
    const auto scripted = drive_at_wall(box, {1.0, 2.0, 0.0}, {2.0, 0.0}, 7, 10.0);
    bool ok = scripted.halted && !scripted.collided && scripted.safety_seen && scripted.min_ttc >= floor;

    // Teleop frames override the active safety stop, even when safety still objects to them.
    StackConfig config;
    config.localization_enabled = false;
    Bus bus;
    Stack stack(box, config, bus);
    stack.reset({1.0, 2.0, 0.0});
    stack.set_autonomy(false);
    TickReport before;
    for (int i = 0; i < 200; ++i) {
        bus.publish(topics::kAutonomousCmd, StampedCommand{kAutonomousSource, stack.time(), {2.0, 0.0}});
        before = stack.tick();
    }
    const bool safety_held = before.selection.active_source && *before.selection.active_source == "safety";
    bus.publish(topics::kAutonomousCmd, StampedCommand{kAutonomousSource, stack.time(), {2.0, 0.0}});
    bus.publish(topics::kTeleopCmd, StampedCommand{kTeleopSource, stack.time(), {2.0, 0.1}});
    const auto t = stack.tick();
    const bool preempted = safety_held && t.safety_stop && t.selection.active_source &&
                           *t.selection.active_source == "teleop" && t.selection.cmd == AckermannDrive{2.0, 0.1};
    ok = ok && preempted;

    // Property: random approaches toward a wall never breach half the threshold.
    RandomStream rng(1008);
    int held = 0;
    double worst = INFINITY;
    for (int i = 0; i < 30; ++i) {
        const Pose2D start{rng.uniform(0.8, 6.0), rng.uniform(1.2, 2.8), rng.uniform(-0.3, 0.3)};
        const AckermannDrive cmd{rng.uniform(0.5, 2.0), rng.uniform(-0.1, 0.1)};
        const auto r = drive_at_wall(box, start, cmd, 100 + i, 8.0);
        worst = std::min(worst, r.min_ttc);
        if (!r.collided && r.min_ttc >= floor) ++held;
    }
    ok = ok && held == 30;
    return {ok, "scripted min ttc " + fmt(scripted.min_ttc) + " s" + (scripted.halted ? " halted" : " moving") +
                    ", teleop preempts safety: " + (preempted ? "yes" : "no") + ", property " +
                    std::to_string(held) + "/30 (worst " + fmt(worst) + " s, floor " + fmt(floor) + " s)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / ("rcnav_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<std::string> logs;
    bool ran = true;
    for (const char* name : {"a.jsonl", "b.jsonl"}) {
        const std::string cmd = std::string(RCNAV_CLI_PATH) + " sim --map " + (kSource / "maps" / "room.yaml").string() +
                                " --seed 7 --duration 10 --headless --realtime-factor 0 --goal 8,4 --record " +
                                (dir / name).string() + " > /dev/null 2>&1";
        ran = ran && std::system(cmd.c_str()) == 0;
        logs.push_back(slurp(dir / name));
    }
    fs::remove_all(dir);
    const bool same = ran && !logs[0].empty() && logs[0] == logs[1];
    return {same, std::to_string(logs[0].size()) + " bytes, " + (same ? "identical" : "different or missing")};
}

std::string pgm(int w, int h, const std::vector<unsigned char>& px) {
    std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(px.begin(), px.end());
    return s;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Outcome map_interchange() {
    const fs::path dir = fs::temp_directory_path() / ("rcnav_maps_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<unsigned char> ramp(256);
    for (int v = 0; v < 256; ++v) ramp[v] = static_cast<unsigned char>(v);
    put(dir / "ramp.pgm", pgm(256, 1, ramp));
    int correct = 0;
    for (int negate = 0; negate <= 1; ++negate) {
        put(dir / "ramp.yaml", "image: ramp.pgm\nresolution: 0.05\norigin: [0, 0, 0]\nnegate: " +
                                   std::to_string(negate) + "\noccupied_thresh: 0.65\nfree_thresh: 0.196\n");
        const auto g = load_map(dir / "ramp.yaml");
        for (int v = 0; v < 256; ++v) {
            const double p = negate ? v / 255.0 : (255.0 - v) / 255.0;
            const Cell want = p > 0.65 ? Cell::Occupied : p < 0.196 ? Cell::Free : Cell::Unknown;
            if (g.at(v, 0) == want) ++correct;
        }
    }

    put(dir / "six.pgm", pgm(3, 2, {0, 255, 205, 254, 50, 128}));
    put(dir / "six.yaml",
        "image: six.pgm\nresolution: 0.5\norigin: [-1.0, 2.0, 0.0]\nnegate: 0\noccupied_thresh: 0.65\nfree_thresh: "
        "0.196\n");
    const auto six = load_map(dir / "six.yaml");
    const std::vector<Cell> expected{Cell::Free, Cell::Occupied, Cell::Unknown,
                                     Cell::Occupied, Cell::Free, Cell::Unknown};
    const bool six_ok = six.width() == 3 && six.height() == 2 && six.resolution() == 0.5 &&
                        six.origin() == Pose2D{-1.0, 2.0, 0.0} &&
                        std::vector<Cell>(six.cells().begin(), six.cells().end()) == expected;
    fs::remove_all(dir);
    return {correct == 512 && six_ok,
            std::to_string(correct) + "/512 gray values, six-cell map " + (six_ok ? "exact" : "wrong")};
}

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments pick criteria by number.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<Criterion> criteria{
        {1, "integrator exactness", 5, integrator},
        {2, "raycast oracle equivalence", 30, raycasting},
        {3, "distance-field exactness", 10, distance_field},
        {4, "resampler statistics", 20, resampler},
        {5, "localization convergence", 120, localization},
        {6, "controller selection consistency", 30, selection},
        {7, "end-to-end navigation", 120, navigation},
        {8, "mux/safety closed loop", 30, safety_loop},
        {9, "determinism", 30, determinism},
        {10, "map interchange", 5, map_interchange},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = secs < c.budget_s;
        const bool pass = o.pass && in_budget;
        failed += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name << "  ("
                  << std::fixed << std::setprecision(2) << secs << " s of " << std::setprecision(0) << c.budget_s
                  << " s" << (in_budget ? "" : ", over budget") << ")  " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
