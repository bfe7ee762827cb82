#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rcnav/core/types.hpp"

namespace rcnav {

struct CommandSource {
    std::string id;
    int priority{0};   // higher wins
    double timeout{0.5};
};

struct StampedCommand {
    std::string source_id;
    double stamp{0.0};
    AckermannDrive cmd{};
};

/// Default source table: teleop 30 > safety 20 > autonomous 10.
std::vector<CommandSource> default_sources();

inline constexpr const char* kTeleopSource = "teleop";
inline constexpr const char* kSafetySource = "safety";
inline constexpr const char* kAutonomousSource = "autonomous";

struct MuxSelection {
    AckermannDrive cmd{};
    /// Empty when no source is fresh (the output is a stop).
    std::optional<std::string> active_source;
};

using LatestCommands = std::map<std::string, StampedCommand>;

/// Among sources whose latest command is fresh ((now - stamp) <= timeout), returns the
/// command of the highest-priority one; a stop when none is fresh. Entries whose id is
/// not in `sources` are ignored. Pure.
MuxSelection mux_select(const LatestCommands& latest, double now, const std::vector<CommandSource>& sources);

/// Throws ConfigError on duplicate ids, duplicate priorities or non-positive timeouts.
void validate_sources(const std::vector<CommandSource>& sources);

/// Holds the latest command per registered source. submit() may be called from any thread;
/// snapshot()/select() observe a consistent copy.
class CommandMux {
public:
    explicit CommandMux(std::vector<CommandSource> sources = default_sources());

    /// Stores the command as its source's latest. Unregistered sources and stamps older
    /// than the source's latest are rejected: logged, counted, and reported as false.
    bool submit(const StampedCommand& cmd);

    [[nodiscard]] LatestCommands snapshot() const;
    [[nodiscard]] MuxSelection select(double now) const;
    /// Selection ignoring one source (what the mux would forward without it).
    [[nodiscard]] MuxSelection select_without(double now, const std::string& excluded) const;

    [[nodiscard]] const std::vector<CommandSource>& sources() const noexcept { return sources_; }
    [[nodiscard]] std::size_t rejected() const;
    [[nodiscard]] double max_timeout() const noexcept;

private:
    std::vector<CommandSource> sources_;
    mutable std::mutex mutex_;
    LatestCommands latest_;
    std::size_t rejected_{0};
};

}  // namespace rcnav
