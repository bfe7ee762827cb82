#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rcnav {

/// Seeded pseudo-random stream used by every stochastic module.
///
/// Generator: xoshiro256** (Blackman & Vigna), state seeded from the 64-bit seed with
/// splitmix64. Uniform doubles use the top 53 bits; normals use the Box-Muller transform
/// on two uniforms (no cached spare, so every normal draw consumes exactly two words).
/// The algorithm is fixed so runs are bit-reproducible across platforms, which the
/// standard library distributions do not guarantee.
///
/// A stream is single-owner. Parallel loops derive one child stream per work item with
/// `derive(key, index)`, so results do not depend on thread scheduling.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) noexcept;

    /// Independent child stream for work item `index` under a parent-drawn `key`.
    [[nodiscard]] static RandomStream derive(std::uint64_t key, std::uint64_t index) noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;
    std::uint64_t operator()() noexcept { return next_u64(); }
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform in [0, 1).
    double uniform() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    /// Standard normal.
    double normal() noexcept;
    double normal(double mean, double sigma) noexcept { return mean + sigma * normal(); }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
};

/// splitmix64 finalizer; exposed for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace rcnav
