#include "rcnav/core/angle.hpp"

#include <cmath>

#include "rcnav/core/errors.hpp"

namespace rcnav {

double normalize_angle(double a) {
    if (!std::isfinite(a)) {
        throw DomainError("normalize_angle: non-finite angle");
    }
    if (a > -kPi && a <= kPi) {
        return a;
    }
    double r = std::fmod(a + kPi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    r -= kPi;
    // fmod rounding can land exactly on the excluded boundary or one ulp outside.
    if (r <= -kPi) {
        r = kPi;
    } else if (r > kPi) {
        r = kPi;
    }
    return r;
}

double angle_diff(double a, double b) { return normalize_angle(a - b); }

}  // namespace rcnav
