#include "rcnav/esc/esc.hpp"

#include <algorithm>
#include <cmath>

#include "rcnav/core/errors.hpp"

namespace rcnav {
namespace {

double slew(double prev, double target, double budget) noexcept {
    const double delta = target - prev;
    // Absorbs rounding left over from summing equal steps.
    if (std::abs(delta) <= budget + 1e-12) return target;
    return prev + std::copysign(budget, delta);
}

}  // namespace

AckermannDrive smooth(const AckermannDrive& prev, const AckermannDrive& target, double dt, const SmootherParams& sp) {
    if (!(dt > 0.0)) throw DomainError("smooth: dt must be > 0");
    return {slew(prev.speed, target.speed, sp.accel_max * dt),
            slew(prev.steering_angle, target.steering_angle, sp.steer_rate_max * dt)};
}

void ActuatorCalibration::validate() const {
    if (erpm_gain == 0.0 || servo_gain == 0.0) throw ConfigError("actuator calibration: gains must be non-zero");
    if (!(erpm_limit > 0.0)) throw ConfigError("actuator calibration: erpm_limit must be > 0");
}

ActuatorCommand to_actuator(const AckermannDrive& cmd, const ActuatorCalibration& cal) {
    return {std::clamp(cal.erpm_gain * cmd.speed + cal.erpm_offset, -cal.erpm_limit, cal.erpm_limit),
            std::clamp(cal.servo_gain * cmd.steering_angle + cal.servo_offset, 0.0, 1.0)};
}

AckermannDrive from_actuator(const ActuatorCommand& a, const ActuatorCalibration& cal) {
    cal.validate();
    return {(a.motor_erpm - cal.erpm_offset) / cal.erpm_gain, (a.servo_position - cal.servo_offset) / cal.servo_gain};
}

Esc::Esc(CommandMux& mux, SmootherParams smoother, ActuatorCalibration cal)
    : mux_(&mux), smoother_(smoother), cal_(cal) {
    if (!(smoother_.accel_max > 0.0) || !(smoother_.steer_rate_max > 0.0)) {
        throw ConfigError("smoother: rates must be > 0");
    }
    cal_.validate();
}

EscOutput Esc::tick(double now, double dt) {
    EscOutput out;
    out.selection = mux_->select(now);
    current_ = smooth(current_, out.selection.cmd, dt, smoother_);
    out.smoothed = current_;
    out.actuator = to_actuator(current_, cal_);
    return out;
}

}  // namespace rcnav
