#pragma once

#include <cstdint>

namespace expdyn {

// One splitmix64 step: advance the state by the golden-gamma and finalize.
constexpr std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// n-th draw of a counter-based stream: seed the state with seed XOR n, take one
// splitmix64 output, and map the 53 high bits to a uniform double in (0,1).
// Stateless, so any subset of indices can be evaluated in any order.
constexpr double uniform_draw(std::uint64_t seed, std::uint64_t n) {
    const std::uint64_t bits = splitmix64(seed ^ n);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Stable sub-seed for trial `idx` of an experiment with the given master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t idx) {
    return splitmix64(master ^ splitmix64(idx));
}

}  // namespace expdyn
