#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcnav/bus/telemetry_server.hpp"
#include "rcnav/control/rollout.hpp"
#include "rcnav/esc/esc.hpp"
#include "rcnav/esc/mux.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/safety/safety.hpp"
#include "rcnav/sim/scan.hpp"
#include "rcnav/sim/simulator.hpp"

namespace rcnav {

enum class InitKind { Around, Global };

/// Every tunable of the stack. Defaults match config/default.yaml.
struct StackConfig {
    std::uint64_t seed{0};
    double dt{0.05};

    VehicleParams vehicle{};
    ScanParams scan{};
    ActuationNoise sim_noise{};
    int actuation_delay_ticks{0};

    bool localization_enabled{true};
    MclConfig localization{.motion_noise = {0.1, 0.04}};
    InitKind init{InitKind::Around};

    RolloutLibraryConfig rollouts{};
    CostWeights cost{.w_steer = 0.02};
    double lookahead{1.5};
    double goal_tolerance{0.3};
    /// Added to the footprint length and width when the planner checks collisions.
    double footprint_inflation{0.8};

    SmootherParams smoother{};
    ActuatorCalibration actuator{};
    std::vector<CommandSource> sources{default_sources()};

    bool safety_enabled{true};
    SafetyParams safety{};

    TelemetryConfig telemetry{};

    // Run options (each has a command-line flag).
    std::filesystem::path map;
    double duration{30.0};
    bool headless{false};
    std::optional<std::string> serve;
    std::optional<std::filesystem::path> record;
    std::optional<std::filesystem::path> replay;
    double realtime_factor{1.0};
    bool fail_on_collision{false};
    /// Unset: the free cell farthest from any obstacle, heading 0.
    std::optional<Pose2D> start;
    std::optional<Point2D> goal;
    std::optional<std::filesystem::path> waypoints;
    double timeout{60.0};
    std::optional<std::filesystem::path> script;
    /// Seed list for localize-bench: "1-20", "3,5,9" or a mix.
    std::string seeds{"1-20"};

    /// Throws ConfigError on any invalid value.
    void validate() const;
};

/// Overlays a YAML file onto `config`. Unknown keys are rejected.
/// Throws LoadError when the file cannot be read and ConfigError on bad keys or values.
void apply_config_file(StackConfig& config, const std::filesystem::path& path);

/// Overlays YAML text (same schema as the file).
void apply_config_text(StackConfig& config, const std::string& yaml);

/// Parses "host:port".
std::pair<std::string, unsigned short> parse_endpoint(const std::string& text);

}  // namespace rcnav
