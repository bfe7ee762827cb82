#include "rcnav/esc/mux.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

#include "rcnav/core/errors.hpp"

namespace rcnav {

std::vector<CommandSource> default_sources() {
    return {{kTeleopSource, 30, 0.3}, {kSafetySource, 20, 0.3}, {kAutonomousSource, 10, 0.5}};
}

void validate_sources(const std::vector<CommandSource>& sources) {
    std::set<std::string> ids;
    std::set<int> priorities;
    for (const auto& s : sources) {
        if (!ids.insert(s.id).second) throw ConfigError("mux: duplicate source id '" + s.id + "'");
        if (!priorities.insert(s.priority).second) {
            throw ConfigError("mux: duplicate priority " + std::to_string(s.priority));
        }
        if (!(s.timeout > 0.0)) throw ConfigError("mux: timeout of '" + s.id + "' must be > 0");
    }
}

MuxSelection mux_select(const LatestCommands& latest, double now, const std::vector<CommandSource>& sources) {
    const CommandSource* winner = nullptr;
    const StampedCommand* winner_cmd = nullptr;
    for (const auto& source : sources) {
        const auto it = latest.find(source.id);
        if (it == latest.end()) continue;
        if (now - it->second.stamp > source.timeout) continue;
        if (!winner || source.priority > winner->priority) {
            winner = &source;
            winner_cmd = &it->second;
        }
    }
    if (!winner) return {};
    return {winner_cmd->cmd, winner->id};
}

CommandMux::CommandMux(std::vector<CommandSource> sources) : sources_(std::move(sources)) {
    validate_sources(sources_);
}

bool CommandMux::submit(const StampedCommand& cmd) {
    const bool known = std::any_of(sources_.begin(), sources_.end(),
                                   [&](const CommandSource& s) { return s.id == cmd.source_id; });
    std::lock_guard lock(mutex_);
    if (!known) {
        ++rejected_;
        spdlog::warn("mux: rejected command from unregistered source '{}'", cmd.source_id);
        return false;
    }
    auto it = latest_.find(cmd.source_id);
    if (it != latest_.end() && cmd.stamp < it->second.stamp) {
        ++rejected_;
        spdlog::warn("mux: rejected out-of-order command from '{}' ({} < {})", cmd.source_id, cmd.stamp,
                     it->second.stamp);
        return false;
    }
    latest_[cmd.source_id] = cmd;
    return true;
}

LatestCommands CommandMux::snapshot() const {
    std::lock_guard lock(mutex_);
    return latest_;
}

MuxSelection CommandMux::select(double now) const { return mux_select(snapshot(), now, sources_); }

MuxSelection CommandMux::select_without(double now, const std::string& excluded) const {
    auto latest = snapshot();
    latest.erase(excluded);
    return mux_select(latest, now, sources_);
}

std::size_t CommandMux::rejected() const {
    std::lock_guard lock(mutex_);
    return rejected_;
}

double CommandMux::max_timeout() const noexcept {
    double m = 0.0;
    for (const auto& s : sources_) m = std::max(m, s.timeout);
    return m;
}

}  // namespace rcnav
