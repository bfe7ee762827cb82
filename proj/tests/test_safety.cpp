#include <doctest.h>

#include <cmath>
#include <limits>

#include "rcnav/app/scenarios.hpp"
#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"
#include "rcnav/safety/safety.hpp"
#include "rcnav/sim/scan.hpp"

using namespace rcnav;

namespace {

/// 720-beam scan with every beam empty except those within `width` of `bearing`.
LaserScan scan_with(double bearing, double range, double width = 0.01) {
    LaserScan s;
    s.params = ScanParams{};
    s.ranges.assign(720, s.params.range_max);
    for (int i = 0; i < 720; ++i)
        if (std::abs(angle_diff(s.params.beam_angle(i), bearing)) <= width) s.ranges[i] = range;
    return s;
}

}  // namespace

TEST_SUITE("safety") {

TEST_CASE("min_ttc examples") {
    const SafetyParams sp;
    const auto ahead = scan_with(0.0, 1.25);
    CHECK(std::isinf(min_ttc(ahead, {0.0, 0.0}, sp)));
    CHECK(std::isinf(min_ttc(ahead, {-1.0, 0.0}, sp)));
    CHECK(min_ttc(ahead, {2.0, 0.0}, sp) == doctest::Approx(0.5));
    CHECK(std::isinf(min_ttc(scan_with(kPi, 0.5), {1.0, 0.0}, sp)));
    CHECK(min_ttc(scan_with(0.0, 0.1), {1.0, 0.0}, sp) == 0.0);
}

TEST_CASE("cone follows the steering direction") {
    SafetyParams sp;
    sp.cone_half_angle = 0.3;
    const auto left = scan_with(0.5, 1.0);
    CHECK(std::isinf(min_ttc(left, {1.0, -0.2}, sp)));
    CHECK(min_ttc(left, {1.0, 0.3}, sp) == doctest::Approx(0.75));
}

TEST_CASE("min_ttc equals a direct minimum over the cone") {
    RandomStream rng(3);
    const SafetyParams sp;
    for (int k = 0; k < 500; ++k) {
        LaserScan s;
        s.params = ScanParams{};
        s.ranges.resize(720);
        for (auto& r : s.ranges) r = rng.uniform() < 0.2 ? s.params.range_max : rng.uniform(0.12, 10.0);
        const AckermannDrive c{rng.uniform(0.01, 2.0), rng.uniform(-0.34, 0.34)};
        double want = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 720; ++i) {
            const double a = -kPi + i * (2 * kPi - 2 * kPi / 720) / 719;
            double diff = std::fmod(std::abs(a - c.steering_angle), 2 * kPi);
            diff = std::min(diff, 2 * kPi - diff);
            if (diff <= sp.cone_half_angle && s.ranges[i] < s.params.range_max)
                want = std::min(want, std::max(s.ranges[i] - sp.standoff, 0.0) / c.speed);
        }
        REQUIRE(min_ttc(s, c, sp) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("safety_tick thresholds statelessly") {
    const SafetyParams sp;
    const auto close = scan_with(0.0, 1.25);
    const auto stop = safety_tick(close, {2.0, 0.1}, sp);
    REQUIRE(stop.has_value());
    CHECK(stop->source_id == "safety");
    CHECK(stop->cmd == AckermannDrive{});

    LaserScan open;
    open.params = ScanParams{};
    open.ranges.assign(720, open.params.range_max);
    CHECK_FALSE(safety_tick(open, {2.0, 0.0}, sp).has_value());

    // Range oscillating across the threshold: output is the pointwise threshold function.
    for (int i = 0; i < 200; ++i) {
        const double range = 1.6 + 0.2 * std::sin(i * 0.7);
        const auto s = scan_with(0.0, range);
        const double ttc = (range - sp.standoff) / 2.0;
        REQUIRE(safety_tick(s, {2.0, 0.0}, sp).has_value() == (ttc < sp.ttc_threshold));
    }
}

TEST_CASE("simulated wall ahead triggers at the expected distance") {
    const auto room = walled_box(6, 4);
    ScanParams sp;
    sp.range_noise_sigma = 0;
    RandomStream rng(1);
    const SafetyParams safety;
    // Wall face at x = 6; trigger when (6 - x - standoff) / v < threshold.
    for (double x = 3.0; x < 5.9; x += 0.01) {
        const auto scan = simulate_scan(room, {x, 2.0, 0.0}, sp, rng);
        const bool want = (6.0 - x - safety.standoff) / 1.0 < safety.ttc_threshold;
        if (std::abs((6.0 - x - safety.standoff) - safety.ttc_threshold) < 0.02) continue;
        REQUIRE(safety_tick(scan, {1.0, 0.0}, safety).has_value() == want);
    }
}

TEST_CASE("safety params validation") {
    SafetyParams sp;
    CHECK_NOTHROW(sp.validate());
    sp.standoff = 0;
    CHECK_THROWS_AS(sp.validate(), ConfigError);
}

}  // TEST_SUITE
