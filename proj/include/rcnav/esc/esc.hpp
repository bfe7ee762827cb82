#pragma once

#include "rcnav/core/types.hpp"
#include "rcnav/esc/mux.hpp"

namespace rcnav {

struct SmootherParams {
    double accel_max{2.0};       // m/s^2
    double steer_rate_max{3.0};  // rad/s
};

/// Slew-limits prev toward target: speed by at most accel_max * dt, steering by at most
/// steer_rate_max * dt. Returns target components exactly once they are within budget.
AckermannDrive smooth(const AckermannDrive& prev, const AckermannDrive& target, double dt, const SmootherParams& sp);

struct ActuatorCalibration {
    double erpm_gain{4600.0};   // erpm per m/s
    double erpm_offset{0.0};
    double servo_gain{-1.21};   // per rad
    double servo_offset{0.53};
    double erpm_limit{10000.0};

    /// Throws ConfigError on zero gains or a non-positive erpm limit.
    void validate() const;
};

struct ActuatorCommand {
    double motor_erpm{0.0};
    double servo_position{0.5};  // [0, 1]
};

/// erpm = gain * speed + offset (clamped to +-erpm_limit); servo = clamp(gain * steering + offset, 0, 1).
ActuatorCommand to_actuator(const AckermannDrive& cmd, const ActuatorCalibration& cal);

/// Inverse of to_actuator on the unsaturated region. Throws ConfigError on zero gains.
AckermannDrive from_actuator(const ActuatorCommand& a, const ActuatorCalibration& cal);

struct EscOutput {
    MuxSelection selection;
    AckermannDrive smoothed{};
    ActuatorCommand actuator{};
};

/// Mux -> smoother -> actuator map. One smoother sits after the mux so source switches are
/// slew-limited too.
class Esc {
public:
    Esc(CommandMux& mux, SmootherParams smoother, ActuatorCalibration cal);

    EscOutput tick(double now, double dt);

    [[nodiscard]] const AckermannDrive& current() const noexcept { return current_; }
    [[nodiscard]] const ActuatorCalibration& calibration() const noexcept { return cal_; }

private:
    CommandMux* mux_;
    SmootherParams smoother_;
    ActuatorCalibration cal_;
    AckermannDrive current_{};
};

}  // namespace rcnav
