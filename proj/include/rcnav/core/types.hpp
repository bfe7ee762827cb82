#pragma once

#include <cmath>

namespace rcnav {

/// Planar pose: position in meters, heading in radians (normalized to (-pi, pi]).
struct Pose2D {
    double x{0.0};
    double y{0.0};
    double theta{0.0};

    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

struct Point2D {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline Point2D position(const Pose2D& p) noexcept { return {p.x, p.y}; }

inline double distance(const Point2D& a, const Point2D& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Pose2D& a, const Pose2D& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// a (+) b : b expressed in a's frame, returned in the world frame.
Pose2D pose_compose(const Pose2D& a, const Pose2D& b);

/// Inverse such that pose_compose(p, pose_inverse(p)) is the identity.
Pose2D pose_inverse(const Pose2D& p);

/// Ackermann drive command. speed is signed (negative = reverse), steering positive = left.
struct AckermannDrive {
    double speed{0.0};
    double steering_angle{0.0};

    friend bool operator==(const AckermannDrive&, const AckermannDrive&) = default;
};

struct VehicleParams {
    double wheelbase{0.33};
    double footprint_length{0.44};
    double footprint_width{0.28};
    /// Distance from the rear axle to the rear bumper. The footprint centre sits
    /// footprint_length / 2 - rear_overhang ahead of the rear axle.
    double rear_overhang{0.05};
    double steering_limit{0.34};
    double speed_limit{2.0};

    /// Throws ConfigError if any dimension or limit is not positive.
    void validate() const;

    [[nodiscard]] double footprint_center_offset() const noexcept {
        return footprint_length / 2.0 - rear_overhang;
    }
};

/// Clamps speed and steering into the vehicle limits.
AckermannDrive clamp_to_limits(const AckermannDrive& cmd, const VehicleParams& params) noexcept;

}  // namespace rcnav
