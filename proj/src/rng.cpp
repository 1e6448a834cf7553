#include "rwc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rwc {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below requires a positive bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
}

long long Rng::uniform_int(long long lo, long long hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform_int requires lo <= hi");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(below(span));
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] keeps log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::vector<std::int8_t> sample_ternary_weights(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<std::int8_t> out(count);
    for (auto& w : out) w = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
    return out;
}

void fill_ternary(Rng& rng, std::span<double> out) {
    for (auto& w : out) w = static_cast<double>(static_cast<int>(rng.below(3)) - 1);
}

}  // namespace rwc
