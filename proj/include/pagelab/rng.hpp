#pragma once

#include <cstdint>

namespace pagelab::rng {

// SplitMix64 finalizer. Bijective on 64-bit words, passes the usual
// avalanche batteries; good enough to stand in for a fully random
// function at the scales simulated here.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream: value i of the stream keyed by `seed`.
// Streams with distinct seeds are independent for practical purposes,
// and any (seed, index) pair can be evaluated out of order, which keeps
// Monte Carlo trials reproducible no matter how they are scheduled.
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return at(at(seed, a), b);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small sequential generator for places where a stream index is clumsy.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() { return to_unit_double(next()); }

    // Uniform in [0, n). Bias is n / 2^64, irrelevant for n << 2^32.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

} // namespace pagelab::rng
