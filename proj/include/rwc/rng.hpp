#pragma once

// Deterministic, order-independent seeding.
//
// Every random draw in the engine descends from a single master seed through
// a counter-based derivation: child = mix(mix(parent) + mix(index + C)). The
// engine behind each stream is std::mt19937_64, whose output sequence is fixed
// by the C++ standard (the 10000th draw from the default seed is
// 9981545732273789042). Uniform, integer and normal variates are produced by
// the routines in this header rather than std::*_distribution, whose outputs
// differ between standard library implementations.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rwc {

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of child stream `index` under `parent`. Injective in either argument
/// when the other is held fixed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent) + mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Seed for branch `branch_index` of a run.
constexpr std::uint64_t branch_seed(std::uint64_t master_seed, std::uint64_t branch_index) noexcept {
    return derive_seed(master_seed, branch_index);
}

/// Named sub-streams hanging off a branch or run seed.
enum class Stream : std::uint64_t {
    network_params = 0,
    branch_kmeans = 1,
    consensus = 2,
    elbow_subsample = 3,
    noise = 4,
};

constexpr std::uint64_t stream_seed(std::uint64_t parent, Stream s) noexcept {
    return derive_seed(parent, static_cast<std::uint64_t>(s) + 0x5EED0000ULL);
}

/// Portable random stream over std::mt19937_64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound must be positive. Unbiased
    /// (rejection of the top partial range).
    std::uint64_t below(std::uint64_t bound);

    /// Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi);

    /// Standard normal variate (Box-Muller, pairs cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// `count` i.i.d. draws uniform over {-1, 0, +1}.
std::vector<std::int8_t> sample_ternary_weights(std::uint64_t seed, std::size_t count);

/// Fills `out` with ternary draws from an existing stream.
void fill_ternary(Rng& rng, std::span<double> out);

}  // namespace rwc
