#include <doctest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "rcnav/app/scenarios.hpp"
#include "rcnav/core/angle.hpp"
#include "rcnav/core/errors.hpp"
#include "rcnav/localization/distance_field.hpp"
#include "rcnav/localization/particle_filter.hpp"
#include "rcnav/sim/kinematics.hpp"
#include "rcnav/sim/scan.hpp"

using namespace rcnav;

namespace {

ParticleSet with_weights(const std::vector<double>& w) {
    ParticleSet ps;
    for (std::size_t i = 0; i < w.size(); ++i) ps.particles.push_back({{static_cast<double>(i), 0, 0}, w[i]});
    return ps;
}

std::vector<int> copy_counts(const ParticleSet& out, std::size_t n) {
    std::vector<int> counts(n, 0);
    for (const auto& p : out.particles) ++counts[static_cast<std::size_t>(p.pose.x)];
    return counts;
}

OccupancyGrid asymmetric_room() {
    auto g = walled_box(6, 4, 0.05);
    fill_rect(g, 4.5, 0.0, 6.0, 1.2);
    fill_rect(g, 0.0, 3.0, 1.0, 4.0);
    return g;
}

/// Scan log-likelihood evaluated from the written formula against a brute-force field.
double oracle_log_likelihood(const Pose2D& pose, const LaserScan& scan, const OccupancyGrid& grid,
                             const std::vector<double>& field, const SensorModelParams& smp) {
    double total = 0;
    const auto& sp = scan.params;
    for (int i = 0; i < static_cast<int>(scan.ranges.size()); i += smp.beam_stride) {
        const double r = scan.ranges[i];
        if (r >= sp.range_max) continue;
        const double a = pose.theta + sp.angle_min + i * (sp.angle_max - sp.angle_min) / (sp.beam_count - 1);
        const auto cell = grid.world_to_grid({pose.x + r * std::cos(a), pose.y + r * std::sin(a)});
        const double d = cell ? field[grid.linear(cell->col, cell->row)] : INFINITY;
        total += std::log(smp.z_hit * std::exp(-d * d / (2 * smp.sigma_hit * smp.sigma_hit)) + smp.z_rand / sp.range_max);
    }
    return total;
}

}  // namespace

TEST_SUITE("localization") {

TEST_CASE("initialize examples") {
    const auto g = OccupancyGrid::filled(40, 40, 0.05, {-1, -1, 0}, Cell::Free);
    RandomStream rng(1);
    const auto one = initialize(AroundInit{{0, 0, 0}, 0, 0}, g, 1, rng);
    REQUIRE(one.size() == 1);
    CHECK(one.particles[0].pose == Pose2D{0, 0, 0});
    CHECK(one.particles[0].weight == 1.0);

    const auto room = room_scenario().grid;
    RandomStream a(5), b(5);
    const auto p1 = initialize(GlobalInit{}, room, 1000, a);
    const auto p2 = initialize(GlobalInit{}, room, 1000, b);
    REQUIRE(p1.size() == 1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        const auto c = room.world_to_grid(position(p1.particles[i].pose));
        REQUIRE(c.has_value());
        REQUIRE(room.at(*c) == Cell::Free);
        REQUIRE(p1.particles[i].weight == doctest::Approx(1e-3));
        REQUIRE(p1.particles[i].pose == p2.particles[i].pose);
    }
    CHECK(p1.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

    const auto around = initialize(AroundInit{{5, 4, 0}, 0.5, 0.2}, room, 2000, a);
    for (const auto& p : around.particles) {
        const auto c = room.world_to_grid(position(p.pose));
        REQUIRE((c && room.at(*c) == Cell::Free));
    }
    CHECK(estimate(around).x == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("initialize errors") {
    const auto full = OccupancyGrid::filled(5, 5, 0.1, {}, Cell::Occupied);
    RandomStream rng(1);
    CHECK_THROWS_AS(initialize(GlobalInit{}, full, 10, rng), DomainError);
    const auto free = OccupancyGrid::filled(5, 5, 0.1, {}, Cell::Free);
    CHECK_THROWS_AS(initialize(GlobalInit{}, free, 0, rng), DomainError);
}

TEST_CASE("motion_update examples") {
    const VehicleParams vp;
    RandomStream rng(4);
    ParticleSet ps;
    ps.particles.assign(50, {{1, 2, 0.3}, 0.02});
    const auto moved = motion_update(ps, {1.0, 0.2}, 0.1, vp, {0, 0}, rng);
    const auto want = step_kinematics({1, 2, 0.3}, {1.0, 0.2}, 0.1, vp);
    for (const auto& p : moved.particles) {
        REQUIRE(p.pose == want);
        REQUIRE(p.weight == 0.02);
    }
    const auto still = motion_update(ps, {0, 0}, 0.1, vp, {0, 0.3}, rng);
    for (const auto& p : still.particles) REQUIRE(p.pose == Pose2D{1, 2, 0.3});
    CHECK_THROWS_AS(motion_update(ps, {1, 0}, 0, vp, {}, rng), DomainError);
}

TEST_CASE("motion_update mean travel") {
    const VehicleParams vp;
    RandomStream rng(10);
    ParticleSet ps;
    ps.particles.assign(10000, {{0, 0, 0}, 1e-4});
    const auto moved = motion_update(ps, {1.0, 0.0}, 1.0, vp, {0.1, 0.0}, rng);
    double sum = 0, sum_sq = 0;
    for (const auto& p : moved.particles) {
        const double d = std::hypot(p.pose.x, p.pose.y);
        sum += d;
        sum_sq += d * d;
    }
    const double mean = sum / 1e4;
    CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::sqrt(sum_sq / 1e4 - mean * mean) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("sensor_update examples") {
    const auto room = asymmetric_room();
    const auto field = build_distance_field(room);
    ScanParams sp;
    sp.range_noise_sigma = 0;
    RandomStream rng(2);
    const Pose2D truth{2.0, 2.0, 0.3};
    const auto scan = simulate_scan(room, truth, sp, rng);
    const SensorModelParams smp;

    const auto single = sensor_update(with_weights({1.0}), scan, field, smp);
    CHECK(single.particles.particles[0].weight == 1.0);

    ParticleSet two;
    two.particles = {{truth, 0.5}, {{4.0, 2.0, 0.3}, 0.5}};
    const auto upd = sensor_update(two, scan, field, smp);
    const double w0 = upd.particles.particles[0].weight, w1 = upd.particles.particles[1].weight;
    CHECK(w0 > w1);
    CHECK(w0 + w1 == doctest::Approx(1.0).epsilon(1e-12));

    const auto brute = oracle::brute_distance_field(room);
    const double ll0 = oracle_log_likelihood(two.particles[0].pose, scan, room, brute, smp);
    const double ll1 = oracle_log_likelihood(two.particles[1].pose, scan, room, brute, smp);
    CHECK(ll0 > ll1);
    CHECK(w0 == doctest::Approx(1.0 / (1.0 + std::exp(ll1 - ll0))).epsilon(1e-9));

    SensorModelParams flat = smp;
    flat.z_hit = 0;
    flat.z_rand = 1;
    const auto eq = sensor_update(two, scan, field, flat);
    CHECK(eq.particles.particles[0].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eq.particles.particles[1].weight == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scan_log_likelihood matches the formula for random poses") {
    const auto room = asymmetric_room();
    const auto field = build_distance_field(room);
    const auto brute = oracle::brute_distance_field(room);
    ScanParams sp;
    RandomStream rng(3);
    const auto scan = simulate_scan(room, {3, 2, 1.0}, sp, rng);
    SensorModelParams smp;
    smp.beam_stride = 7;
    for (int i = 0; i < 200; ++i) {
        const Pose2D p{rng.uniform(0, 6), rng.uniform(0, 4), rng.uniform(-kPi, kPi)};
        REQUIRE(scan_log_likelihood(p, scan, field, smp) ==
                doctest::Approx(oracle_log_likelihood(p, scan, room, brute, smp)).epsilon(1e-12));
    }
}

TEST_CASE("weights stay normalized; degenerate updates recover") {
    const auto sc = room_scenario();
    const auto field = build_distance_field(sc.grid);
    RandomStream rng(7);
    auto ps = initialize(GlobalInit{}, sc.grid, 500, rng);
    const auto scan = simulate_scan(sc.grid, sc.start, ScanParams{}, rng);
    for (int k = 0; k < 3; ++k) {
        const auto r = sensor_update(ps, scan, field, SensorModelParams{});
        CHECK_FALSE(r.degenerate);
        double sum = 0;
        for (const auto& p : r.particles.particles) {
            REQUIRE(p.weight >= 0.0);
            sum += p.weight;
        }
        REQUIRE(std::abs(sum - 1.0) < 1e-9);
        ps = r.particles;
    }

    SensorModelParams sharp;
    sharp.z_hit = 1;
    sharp.z_rand = 0;
    sharp.sigma_hit = 1e-3;
    sharp.beam_stride = 1;
    ParticleSet lost;
    lost.particles = {{{20, 20, 0}, 0.5}, {{-20, 20, 0}, 0.5}};
    const auto r = sensor_update(lost, scan, field, sharp);
    CHECK(r.degenerate);
    CHECK(r.particles.particles[0].weight == 0.5);
    CHECK(r.particles.particles[1].weight == 0.5);
}

TEST_CASE("beam likelihood decreases with distance") {
    const SensorModelParams smp;
    double prev = beam_likelihood(0, smp, 10);
    for (double d = 0.001; d < 2.0; d += 0.001) {
        const double l = beam_likelihood(d, smp, 10);
        REQUIRE(l <= prev);
        REQUIRE(l > 0);
        prev = l;
    }
}

TEST_CASE("sensor params are validated") {
    SensorModelParams smp;
    CHECK_NOTHROW(smp.validate());
    smp.z_hit = 0.5;
    CHECK_THROWS_AS(smp.validate(), ConfigError);
    smp = {};
    smp.sigma_hit = 0;
    CHECK_THROWS_AS(smp.validate(), ConfigError);
    smp = {};
    smp.beam_stride = 0;
    CHECK_THROWS_AS(smp.validate(), ConfigError);
}

TEST_CASE("distance field examples") {
    const auto full = OccupancyGrid::filled(7, 5, 0.1, {}, Cell::Occupied);
    const auto ff = build_distance_field(full);
    for (double v : ff.values()) REQUIRE(v == 0.0);

    std::vector<Cell> cells(36, Cell::Free);
    cells[0] = Cell::Occupied;
    const OccupancyGrid one(6, 6, 1.0, {}, cells);
    const auto f = build_distance_field(one);
    CHECK(f.at(3, 4) == 5.0);
    CHECK(f.at(0, 0) == 0.0);
    CHECK(f.lookup({3.5, 4.5}) == 5.0);
    CHECK(std::isinf(f.lookup({-1, 0})));

    const auto empty = OccupancyGrid::filled(4, 4, 1.0, {}, Cell::Free);
    const auto fe = build_distance_field(empty);
    for (double v : fe.values()) REQUIRE(std::isinf(v));

    OccupancyGrid unknown(3, 1, 1.0, {}, {Cell::Unknown, Cell::Free, Cell::Occupied});
    const auto fu = build_distance_field(unknown);
    CHECK(fu.at(0, 0) == 2.0);
}

TEST_CASE("distance field equals brute force on random grids") {
    RandomStream rng(31);
    for (int k = 0; k < 10; ++k) {
        const auto g = oracle::random_grid(30 + k, 50 - k, 0.05, rng.uniform(0.001, 0.2), rng);
        const auto got = build_distance_field(g).values();
        const auto want = oracle::brute_distance_field(g);
        REQUIRE(got == want);
    }
}

TEST_CASE("resample examples") {
    RandomStream rng(1);
    const auto uniform = resample(with_weights({0.25, 0.25, 0.25, 0.25}), rng);
    CHECK(copy_counts(uniform, 4) == std::vector<int>{1, 1, 1, 1});
    for (const auto& p : uniform.particles) CHECK(p.weight == 0.25);

    const auto mass = resample(with_weights({1, 0, 0, 0}), rng);
    CHECK(copy_counts(mass, 4) == std::vector<int>{4, 0, 0, 0});
}

TEST_CASE("resample statistics and the integer bracket") {
    const std::vector<double> w{0.5, 0.3, 0.2};
    const auto ps = with_weights(w);
    RandomStream rng(2024);
    std::vector<double> total(3, 0);
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const auto c = copy_counts(resample(ps, rng), 3);
        for (int i = 0; i < 3; ++i) {
            REQUIRE(c[i] >= std::floor(3 * w[i]));
            REQUIRE(c[i] <= std::ceil(3 * w[i]));
            total[i] += c[i];
        }
    }
    CHECK(std::abs(total[0] / trials - 1.5) <= 0.02);
    CHECK(std::abs(total[1] / trials - 0.9) <= 0.02);
    CHECK(std::abs(total[2] / trials - 0.6) <= 0.02);
}

TEST_CASE("bracket holds for random weights and offsets") {
    RandomStream rng(8);
    for (int k = 0; k < 2000; ++k) {
        const std::size_t n = 1 + rng.uniform_index(40);
        std::vector<double> w(n);
        double s = 0;
        for (auto& x : w) s += x = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        if (s == 0) continue;
        for (auto& x : w) x /= s;
        const auto out = resample_systematic(with_weights(w), rng.uniform());
        REQUIRE(out.size() == n);
        const auto c = copy_counts(out, n);
        for (std::size_t i = 0; i < n; ++i) {
            // Tolerance for cumulative-sum rounding at exact stratum boundaries.
            REQUIRE(c[i] >= std::floor(n * w[i] - 1e-9));
            REQUIRE(c[i] <= std::ceil(n * w[i] + 1e-9));
            REQUIRE(out.particles[i].weight == 1.0 / n);
        }
    }
}

TEST_CASE("should_resample boundaries") {
    CHECK_FALSE(should_resample(with_weights({0.25, 0.25, 0.25, 0.25})));
    CHECK(should_resample(with_weights({1, 0, 0})));
    CHECK(effective_sample_size(with_weights({0.5, 0.5, 0, 0})) == 2.0);
    CHECK_FALSE(should_resample(with_weights({0.5, 0.5, 0, 0}), 0.5));
}

TEST_CASE("estimate examples and formula") {
    ParticleSet one;
    one.particles = {{{1, 2, -0.5}, 1.0}};
    CHECK(estimate(one) == Pose2D{1, 2, -0.5});

    ParticleSet wrap;
    wrap.particles = {{{0, 0, 3 * kPi / 4}, 0.5}, {{0, 0, -3 * kPi / 4}, 0.5}};
    CHECK(estimate(wrap).theta == doctest::Approx(kPi));

    RandomStream rng(9);
    for (int k = 0; k < 200; ++k) {
        ParticleSet ps;
        double total = 0;
        for (int i = 0; i < 50; ++i) {
            ps.particles.push_back({{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-kPi, kPi)}, rng.uniform()});
            total += ps.particles.back().weight;
        }
        for (auto& p : ps.particles) p.weight /= total;
        long double x = 0, y = 0, s = 0, c = 0;
        for (const auto& p : ps.particles) {
            x += p.weight * static_cast<long double>(p.pose.x);
            y += p.weight * static_cast<long double>(p.pose.y);
            s += p.weight * std::sin(static_cast<long double>(p.pose.theta));
            c += p.weight * std::cos(static_cast<long double>(p.pose.theta));
        }
        const auto e = estimate(ps);
        REQUIRE(std::abs(e.x - static_cast<double>(x)) < 1e-12);
        REQUIRE(std::abs(e.y - static_cast<double>(y)) < 1e-12);
        REQUIRE(std::abs(angle_diff(e.theta, static_cast<double>(std::atan2(s, c)))) < 1e-12);
    }
}

TEST_CASE("filter pipeline is deterministic and converges on the room") {
    const auto sc = room_scenario();
    auto run = [&] {
        MclConfig cfg;
        cfg.particle_count = 500;
        ParticleFilter pf(sc.grid, cfg, 99);
        pf.initialize(AroundInit{{5.3, 3.7, 0.15}, 0.5, 0.2});
        RandomStream scan_rng(5);
        std::vector<Pose2D> out;
        Pose2D truth = sc.start;
        const VehicleParams vp;
        for (int t = 0; t < 40; ++t) {
            pf.correct(simulate_scan(sc.grid, truth, ScanParams{}, scan_rng));
            out.push_back(pf.estimate());
            pf.predict({0.5, 0.2}, 0.05, vp);
            truth = step_kinematics(truth, {0.5, 0.2}, 0.05, vp);
        }
        return std::pair{out, truth};
    };
    const auto [a, truth] = run();
    const auto [b, unused] = run();
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(Pose2D)) == 0);
    (void)unused;
    CHECK(distance(a.back(), truth) < 0.2);
}

}  // TEST_SUITE
