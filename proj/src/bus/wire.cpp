#include "rcnav/bus/wire.hpp"

#include <boost/beast/core/detail/base64.hpp>
#include <cmath>
#include <json.hpp>

#include "rcnav/core/errors.hpp"

namespace rcnav::wire {

using nlohmann::json;

namespace {

json pose_json(const Pose2D& p) { return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

double number_field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
    if (!it->is_number()) throw ProtocolError(std::string("field '") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ProtocolError(std::string("field '") + key + "' must be finite");
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_cells_rle(const OccupancyGrid& grid) {
    std::vector<std::uint8_t> out;
    const auto cells = grid.cells();
    std::size_t i = 0;
    while (i < cells.size()) {
        std::size_t j = i;
        while (j < cells.size() && cells[j] == cells[i] && j - i < 0xFFFFFFFFu) ++j;
        const auto count = static_cast<std::uint32_t>(j - i);
        out.push_back(static_cast<std::uint8_t>(cells[i]));
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(count >> (8 * b)));
        i = j;
    }
    return out;
}

std::vector<Cell> decode_cells_rle(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() % 5 != 0) throw ProtocolError("cell RLE length is not a multiple of 5");
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < bytes.size(); i += 5) {
        if (bytes[i] > 2) throw ProtocolError("cell RLE has an invalid cell value");
        std::uint32_t count = 0;
        for (int b = 0; b < 4; ++b) count |= static_cast<std::uint32_t>(bytes[i + 1 + b]) << (8 * b);
        cells.insert(cells.end(), count, static_cast<Cell>(bytes[i]));
    }
    return cells;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    namespace b64 = boost::beast::detail::base64;
    std::string out(b64::encoded_size(bytes.size()), '\0');
    out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    namespace b64 = boost::beast::detail::base64;
    if (text.size() % 4 != 0) throw ProtocolError("invalid base64");
    std::size_t body = text.size();
    for (int pad = 0; pad < 2 && body > 0 && text[body - 1] == '='; ++pad) --body;
    std::vector<std::uint8_t> out(b64::decoded_size(text.size()));
    const auto [written, read] = b64::decode(out.data(), text.data(), body);
    if (read != body) throw ProtocolError("invalid base64");
    out.resize(written);
    return out;
}

std::string encode_map_meta(const OccupancyGrid& grid, double stamp) {
    json j;
    j["type"] = "map_meta";
    j["stamp"] = stamp;
    j["width"] = grid.width();
    j["height"] = grid.height();
    j["resolution"] = grid.resolution();
    j["origin"] = pose_json(grid.origin());
    j["cells"] = base64_encode(encode_cells_rle(grid));
    return j.dump();
}

std::vector<Particle> decimate_particles(const ParticleSet& ps, std::size_t limit) {
    const std::size_t n = ps.size();
    if (n <= limit) return ps.particles;
    std::vector<Particle> out;
    out.reserve(limit);
    for (std::size_t k = 0; k < limit; ++k) out.push_back(ps.particles[k * n / limit]);
    return out;
}

std::string encode_state(const StateFrame& f) {
    json j;
    j["type"] = "state";
    j["stamp"] = f.stamp;
    j["pose"] = pose_json(f.pose);
    j["estimate"] = pose_json(f.estimate);
    j["scan"] = {{"angle_min", f.scan_angle_min}, {"angle_increment", f.scan_angle_increment}, {"ranges", f.ranges}};
    json particles = json::array();
    for (const auto& p : f.particles) {
        particles.push_back({{"x", p.pose.x}, {"y", p.pose.y}, {"theta", p.pose.theta}, {"w", p.weight}});
    }
    j["particles"] = std::move(particles);
    json rollouts = json::array();
    for (const auto& r : f.rollouts) {
        json pts = json::array();
        for (const auto& p : r.points) pts.push_back({p.x, p.y});
        rollouts.push_back({{"cost", r.cost}, {"points", std::move(pts)}});
    }
    j["rollouts"] = std::move(rollouts);
    j["mux"] = {{"active_source", f.active_source}, {"speed", f.mux_cmd.speed}, {"steering", f.mux_cmd.steering_angle}};
    j["collided"] = f.collided;
    j["goal"] = f.goal ? json{{"x", f.goal->x}, {"y", f.goal->y}} : json(nullptr);
    j["done"] = f.done;
    return j.dump();
}

std::string encode_error(const std::string& detail, double stamp) {
    return json{{"type", "error"}, {"stamp", stamp}, {"detail", detail}}.dump();
}

std::string encode_command_record(const StampedCommand& cmd) {
    return json{{"type", "command"},
                {"stamp", cmd.stamp},
                {"source", cmd.source_id},
                {"speed", cmd.cmd.speed},
                {"steering", cmd.cmd.steering_angle}}
        .dump();
}

ClientMessage parse_client_message(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ProtocolError("frame must be a JSON object");
    const auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) throw ProtocolError("missing string field 'type'");
    const std::string type = type_it->get<std::string>();
    if (type == "drive") return DriveMsg{number_field(j, "speed"), number_field(j, "steering")};
    if (type == "goal") return GoalMsg{number_field(j, "x"), number_field(j, "y")};
    if (type == "estop") return EstopMsg{};
    throw ProtocolError("unknown message type '" + type + "'");
}

}  // namespace rcnav::wire
