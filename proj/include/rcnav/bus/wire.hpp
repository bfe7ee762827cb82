#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rcnav/control/rollout.hpp"
#include "rcnav/core/types.hpp"
#include "rcnav/esc/mux.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/map/occupancy_grid.hpp"
#include "rcnav/sim/scan.hpp"

/// Wire protocol: one JSON object per WebSocket text frame, discriminated by "type".
namespace rcnav::wire {

inline constexpr std::size_t kMaxWireParticles = 256;

/// Run-length encoding of the cell raster, row-major from grid row 0 (the map bottom):
/// a sequence of 5-byte runs, [value u8 (0 free, 1 occupied, 2 unknown)][count u32 LE].
std::vector<std::uint8_t> encode_cells_rle(const OccupancyGrid& grid);
std::vector<Cell> decode_cells_rle(const std::vector<std::uint8_t>& bytes);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

std::string encode_map_meta(const OccupancyGrid& grid, double stamp = 0.0);

struct StateFrame {
    double stamp{0.0};
    Pose2D pose{};
    Pose2D estimate{};
    double scan_angle_min{0.0};
    double scan_angle_increment{0.0};
    std::vector<double> ranges;
    std::vector<Particle> particles;  // already decimated
    struct RolloutLine {
        double cost{0.0};
        std::vector<Point2D> points;
    };
    std::vector<RolloutLine> rollouts;
    std::string active_source{"none"};
    AckermannDrive mux_cmd{};
    bool collided{false};
    std::optional<Point2D> goal;
    bool done{false};
};

/// Evenly strided subset of at most `limit` particles (all of them when N <= limit).
std::vector<Particle> decimate_particles(const ParticleSet& ps, std::size_t limit = kMaxWireParticles);

std::string encode_state(const StateFrame& frame);
std::string encode_error(const std::string& detail, double stamp = 0.0);
std::string encode_command_record(const StampedCommand& cmd);

struct DriveMsg {
    double speed{0.0};
    double steering{0.0};
};
struct GoalMsg {
    double x{0.0};
    double y{0.0};
};
struct EstopMsg {};
using ClientMessage = std::variant<DriveMsg, GoalMsg, EstopMsg>;

/// Parses a client frame. Throws ProtocolError with a human-readable detail.
ClientMessage parse_client_message(const std::string& text);

}  // namespace rcnav::wire
