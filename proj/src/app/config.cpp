#include "rcnav/app/config.hpp"

#include <algorithm>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "rcnav/core/errors.hpp"

namespace rcnav {
namespace {

class Section {
public:
    Section(const YAML::Node& node, std::string name, std::set<std::string> keys)
        : node_(node), name_(std::move(name)), keys_(std::move(keys)) {
        if (node_ && !node_.IsMap()) throw ConfigError("config: '" + name_ + "' must be a mapping");
        if (!node_) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!keys_.count(key)) throw ConfigError("config: unknown key '" + qualified(key) + "'");
        }
    }

    template <typename T>
    void get(const char* key, T& out) const {
        if (!node_) return;
        const YAML::Node v = node_[key];
        if (!v) return;
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("config: bad value for '" + qualified(key) + "'");
        }
    }

    void pose(const char* key, Pose2D& out) const {
        std::vector<double> v;
        get(key, v);
        if (v.empty()) return;
        if (v.size() != 3 && v.size() != 2) throw ConfigError("config: '" + qualified(key) + "' must be [x, y, theta]");
        out = {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
    }

    [[nodiscard]] YAML::Node child(const char* key) const { return node_ ? node_[key] : YAML::Node(); }
    [[nodiscard]] std::string qualified(const std::string& key) const {
        return name_.empty() ? key : name_ + "." + key;
    }

private:
    YAML::Node node_;
    std::string name_;
    std::set<std::string> keys_;
};

void apply(StackConfig& c, const YAML::Node& root) {
    if (!root || root.IsNull()) return;
    const Section top(root, "",
                      {"seed", "dt", "vehicle", "scan", "sim", "localization", "control", "esc", "mux", "safety",
                       "telemetry", "run"});
    top.get("seed", c.seed);
    top.get("dt", c.dt);

    const Section vehicle(top.child("vehicle"), "vehicle",
                          {"wheelbase", "footprint_length", "footprint_width", "rear_overhang", "steering_limit",
                           "speed_limit"});
    vehicle.get("wheelbase", c.vehicle.wheelbase);
    vehicle.get("footprint_length", c.vehicle.footprint_length);
    vehicle.get("footprint_width", c.vehicle.footprint_width);
    vehicle.get("rear_overhang", c.vehicle.rear_overhang);
    vehicle.get("steering_limit", c.vehicle.steering_limit);
    vehicle.get("speed_limit", c.vehicle.speed_limit);

    const Section scan(top.child("scan"), "scan",
                       {"beam_count", "angle_min", "angle_max", "range_min", "range_max", "range_noise_sigma",
                        "unknown_blocks", "mount"});
    scan.get("beam_count", c.scan.beam_count);
    scan.get("angle_min", c.scan.angle_min);
    scan.get("angle_max", c.scan.angle_max);
    scan.get("range_min", c.scan.range_min);
    scan.get("range_max", c.scan.range_max);
    scan.get("range_noise_sigma", c.scan.range_noise_sigma);
    scan.get("unknown_blocks", c.scan.unknown_blocks);
    scan.pose("mount", c.scan.mount);

    const Section sim(top.child("sim"), "sim", {"speed_noise", "steering_noise", "actuation_delay_ticks"});
    sim.get("speed_noise", c.sim_noise.speed_sigma);
    sim.get("steering_noise", c.sim_noise.steering_sigma);
    sim.get("actuation_delay_ticks", c.actuation_delay_ticks);

    const Section loc(top.child("localization"), "localization",
                      {"enabled", "particles", "sigma_hit", "z_hit", "z_rand", "beam_stride", "speed_noise",
                       "steering_noise", "resample_threshold", "init", "init_sigma_xy", "init_sigma_theta"});
    loc.get("enabled", c.localization_enabled);
    loc.get("particles", c.localization.particle_count);
    loc.get("sigma_hit", c.localization.sensor.sigma_hit);
    loc.get("z_hit", c.localization.sensor.z_hit);
    loc.get("z_rand", c.localization.sensor.z_rand);
    loc.get("beam_stride", c.localization.sensor.beam_stride);
    loc.get("speed_noise", c.localization.motion_noise.speed_sigma);
    loc.get("steering_noise", c.localization.motion_noise.steering_sigma);
    loc.get("resample_threshold", c.localization.resample_threshold);
    loc.get("init_sigma_xy", c.localization.init_sigma_xy);
    loc.get("init_sigma_theta", c.localization.init_sigma_theta);
    std::string init;
    loc.get("init", init);
    if (init == "global") c.init = InitKind::Global;
    else if (init == "around") c.init = InitKind::Around;
    else if (!init.empty()) throw ConfigError("config: localization.init must be 'around' or 'global'");

    const Section ctl(top.child("control"), "control",
                      {"candidates", "horizon", "dt", "v_nominal", "w_goal", "w_collision", "w_steer",
                       "collision_lethal", "lookahead", "goal_tolerance", "footprint_inflation"});
    ctl.get("candidates", c.rollouts.candidates);
    ctl.get("horizon", c.rollouts.horizon);
    ctl.get("dt", c.rollouts.dt);
    ctl.get("v_nominal", c.rollouts.v_nominal);
    ctl.get("w_goal", c.cost.w_goal);
    ctl.get("w_collision", c.cost.w_collision);
    ctl.get("w_steer", c.cost.w_steer);
    ctl.get("collision_lethal", c.cost.collision_lethal);
    ctl.get("lookahead", c.lookahead);
    ctl.get("goal_tolerance", c.goal_tolerance);
    ctl.get("footprint_inflation", c.footprint_inflation);

    const Section esc(top.child("esc"), "esc",
                      {"accel_max", "steer_rate_max", "erpm_gain", "erpm_offset", "servo_gain", "servo_offset",
                       "erpm_limit"});
    esc.get("accel_max", c.smoother.accel_max);
    esc.get("steer_rate_max", c.smoother.steer_rate_max);
    esc.get("erpm_gain", c.actuator.erpm_gain);
    esc.get("erpm_offset", c.actuator.erpm_offset);
    esc.get("servo_gain", c.actuator.servo_gain);
    esc.get("servo_offset", c.actuator.servo_offset);
    esc.get("erpm_limit", c.actuator.erpm_limit);

    const YAML::Node mux = top.child("mux");
    if (mux) {
        if (!mux.IsMap()) throw ConfigError("config: 'mux' must be a mapping");
        for (const auto& kv : mux) {
            const auto id = kv.first.as<std::string>();
            const Section src(kv.second, "mux." + id, {"priority", "timeout"});
            auto it = std::find_if(c.sources.begin(), c.sources.end(), [&](const auto& s) { return s.id == id; });
            if (it == c.sources.end()) {
                c.sources.push_back({id, 0, 0.5});
                it = std::prev(c.sources.end());
            }
            src.get("priority", it->priority);
            src.get("timeout", it->timeout);
        }
    }

    const Section safety(top.child("safety"), "safety", {"enabled", "ttc_threshold", "cone_half_angle", "standoff"});
    safety.get("enabled", c.safety_enabled);
    safety.get("ttc_threshold", c.safety.ttc_threshold);
    safety.get("cone_half_angle", c.safety.cone_half_angle);
    safety.get("standoff", c.safety.standoff);

    const Section tel(top.child("telemetry"), "telemetry", {"address", "port", "snapshot_rate"});
    tel.get("address", c.telemetry.address);
    tel.get("port", c.telemetry.port);
    tel.get("snapshot_rate", c.telemetry.snapshot_rate);

    const Section run(top.child("run"), "run",
                      {"map", "duration", "headless", "serve", "record", "replay", "realtime_factor",
                       "fail_on_collision", "start", "goal", "waypoints", "timeout", "script", "seeds"});
    std::string path;
    run.get("map", path);
    if (!path.empty()) c.map = path;
    run.get("duration", c.duration);
    run.get("headless", c.headless);
    std::string s;
    run.get("serve", s);
    if (!s.empty()) c.serve = s;
    s.clear();
    run.get("record", s);
    if (!s.empty()) c.record = s;
    s.clear();
    run.get("replay", s);
    if (!s.empty()) c.replay = s;
    s.clear();
    run.get("waypoints", s);
    if (!s.empty()) c.waypoints = s;
    run.get("realtime_factor", c.realtime_factor);
    run.get("fail_on_collision", c.fail_on_collision);
    if (run.child("start")) {
        Pose2D start{};
        run.pose("start", start);
        c.start = start;
    }
    s.clear();
    run.get("script", s);
    if (!s.empty()) c.script = s;
    run.get("seeds", c.seeds);
    Pose2D goal{};
    bool has_goal = false;
    if (run.child("goal")) {
        run.pose("goal", goal);
        has_goal = true;
    }
    if (has_goal) c.goal = Point2D{goal.x, goal.y};
    run.get("timeout", c.timeout);
}

}  // namespace

void StackConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("config: dt must be > 0");
    vehicle.validate();
    scan.validate();
    localization.sensor.validate();
    if (localization.particle_count < 1) throw ConfigError("config: localization.particles must be >= 1");
    if (actuation_delay_ticks < 0 || actuation_delay_ticks > 1) {
        throw ConfigError("config: sim.actuation_delay_ticks must be 0 or 1");
    }
    cost.validate();
    if (!(smoother.accel_max > 0.0) || !(smoother.steer_rate_max > 0.0)) {
        throw ConfigError("config: esc rates must be > 0");
    }
    actuator.validate();
    validate_sources(sources);
    safety.validate();
    if (!(realtime_factor >= 0.0)) throw ConfigError("config: run.realtime_factor must be >= 0");
    if (!(duration > 0.0)) throw ConfigError("config: run.duration must be > 0");
    if (!(timeout > 0.0)) throw ConfigError("config: run.timeout must be > 0");
    if (footprint_inflation < 0.0) throw ConfigError("config: control.footprint_inflation must be >= 0");
    if (!(telemetry.snapshot_rate > 0.0)) throw ConfigError("config: telemetry.snapshot_rate must be > 0");
}

void apply_config_file(StackConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        apply(config, YAML::Load(ss.str()));
    } catch (const YAML::Exception& e) {
        throw ConfigError(path.string() + ": malformed YAML: " + e.what());
    }
}

void apply_config_text(StackConfig& config, const std::string& yaml) {
    try {
        apply(config, YAML::Load(yaml));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: malformed YAML: ") + e.what());
    }
}

std::pair<std::string, unsigned short> parse_endpoint(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw ConfigError("endpoint must be host:port, got '" + text + "'");
    }
    const std::string host = text.substr(0, colon);
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ConfigError("endpoint port is not a number: '" + text + "'");
    }
    if (port < 0 || port > 65535) throw ConfigError("endpoint port out of range: '" + text + "'");
    return {host, static_cast<unsigned short>(port)};
}

}  // namespace rcnav
