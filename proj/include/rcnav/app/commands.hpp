#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rcnav/app/config.hpp"
#include "rcnav/app/scenarios.hpp"

namespace rcnav {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitLoadError = 2;

struct NavigationReport {
    bool success{false};
    bool reached{false};
    bool collided{false};
    bool timed_out{false};
    double elapsed{0.0};
    double path_length{0.0};
    double min_clearance{0.0};
    double localization_rmse{0.0};
};

std::string format_report(const NavigationReport& r);

/// Runs the full stack headless from `start` along `path` until done, collision or config.timeout.
NavigationReport run_navigation(const OccupancyGrid& grid, const StackConfig& config, const Pose2D& start,
                                const std::vector<Pose2D>& path);

struct BenchRow {
    std::uint64_t seed{0};
    double final_position_error{0.0};
    double mean_position_error{0.0};
    double final_heading_error{0.0};
    double mean_heading_error{0.0};
};

/// Drives the simulator open-loop with `script` and tracks it with the particle filter.
/// The config seed is replaced by `seed`.
BenchRow run_localize_bench(const OccupancyGrid& grid, StackConfig config, const Pose2D& start,
                            const std::vector<ScriptSegment>& script, std::uint64_t seed);

/// CSV with a header row; one row per seed.
std::string format_bench_table(const std::vector<BenchRow>& rows);

/// "1-20", "3,5,9", "1-3,10". Throws ConfigError.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Lines of "duration speed steering"; '#' starts a comment. Throws LoadError.
std::vector<ScriptSegment> load_script(const std::filesystem::path& path);

/// Pose whose footprint centre sits on the free cell farthest from any obstacle, heading 0.
Pose2D default_start(const OccupancyGrid& grid, const VehicleParams& params);

/// Goal or waypoint list from the config; empty when neither is set.
std::vector<Pose2D> configured_path(const StackConfig& config);

int cmd_sim(const StackConfig& config, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* interrupted = nullptr);
int cmd_navigate(const StackConfig& config, std::ostream& out, std::ostream& err);
int cmd_localize_bench(const StackConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rcnav
