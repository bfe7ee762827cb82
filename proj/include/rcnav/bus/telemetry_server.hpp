#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "rcnav/bus/bus.hpp"
#include "rcnav/core/types.hpp"

namespace rcnav {

struct TelemetryConfig {
    std::string address{"127.0.0.1"};
    /// 0 picks an ephemeral port; see TelemetryServer::port().
    unsigned short port{8077};
    double snapshot_rate{20.0};
    /// Drive frames are clamped to these limits before they reach the mux.
    VehicleParams limits{};
};

/// WebSocket telemetry / teleoperation endpoint.
///
/// On connect a client receives "map_meta", then at most `snapshot_rate` "state" frames
/// per second taken from the latest frame published on topics::kTelemetry. A client that
/// cannot keep up only ever has one pending state frame (latest wins), so the publishing
/// loop never waits on the network. Incoming "drive", "goal" and "estop" frames are
/// republished on topics::kTeleopCmd / topics::kGoal stamped with the latest bus time
/// (topics::kClock); malformed frames get an "error" frame and the connection stays up.
class TelemetryServer {
public:
    TelemetryServer(Bus& bus, std::string map_meta_frame, TelemetryConfig config);
    ~TelemetryServer();
    TelemetryServer(const TelemetryServer&) = delete;
    TelemetryServer& operator=(const TelemetryServer&) = delete;

    /// Binds and starts the network thread. Throws std::runtime_error when the bind fails.
    void start();
    void stop();

    [[nodiscard]] unsigned short port() const;
    [[nodiscard]] std::size_t client_count() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace rcnav
