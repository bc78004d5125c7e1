#pragma once

#include <cstdint>
#include <optional>

#include "pagelab/trace.hpp"

namespace pagelab {

// Parameters of the phased scan adversary: s disjoint sets of k' items, each
// scanned sequentially t times. Defaults follow the lower-bound construction
//   s = ceil(16 exp(8 (1-delta)^-1 delta^2 alpha)),  t = ceil(c alpha s^2),
//   k' = ceil((1-delta) k),
// which explode quickly, so desk-scale runs override s and t.
struct TradeoffAdversaryParams {
    std::size_t k = 0;
    std::size_t alpha = 1;
    double delta = 0.5;  // in (0, 1)
    double c = 1.0;      // target competitive ratio
    std::optional<std::uint64_t> s_override;
    std::optional<std::uint64_t> t_override;
};

struct TradeoffAdversaryResolved {
    std::uint64_t s = 0;
    std::uint64_t t = 0;
    std::uint64_t k_prime = 0;
    std::uint64_t length = 0; // s * t * k'
    // Universe requirement of the construction at its default scale,
    // 16 k exp(8 (1-delta)^-1 delta^2 alpha); desk-scale overrides usually
    // leave it unmet.
    double theoretical_universe = 0.0;
    bool theoretical_universe_met = false;
};

// Evaluates the parameter formulas (with overrides applied) without
// materializing the trace. `universe_size` is how many ids are available
// starting at universe_start; pass 0 for "unbounded".
TradeoffAdversaryResolved resolve_tradeoff_adversary(const TradeoffAdversaryParams& params,
                                                     std::uint64_t universe_size = 0);

// Materializes the trace: phases i = 0..s-1 of t sequential scans over the
// disjoint id block [start + i*k', start + (i+1)*k').
// Throws when the universe cannot supply s*k' items or the trace would
// exceed `length_budget` requests.
Trace tradeoff_adversary(const TradeoffAdversaryParams& params, ItemId universe_start,
                         std::uint64_t universe_size = 0,
                         std::uint64_t length_budget = 1ULL << 31);

// One block of k' distinct items scanned cyclically `repetitions` times.
Trace fixed_set_cycler(std::uint64_t k_prime, std::uint64_t repetitions, ItemId universe_start);

// i.i.d. draws from a Zipf(exponent) distribution over ids
// [universe_start, universe_start + universe_size); exponent 0 is uniform.
Trace zipf_trace(std::uint64_t universe_size, double exponent, std::uint64_t length,
                 std::uint64_t seed, ItemId universe_start = 0);

} // namespace pagelab
