#include "pagelab/adversary.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pagelab/rng.hpp"

namespace pagelab {

TradeoffAdversaryResolved resolve_tradeoff_adversary(const TradeoffAdversaryParams& params,
                                                     std::uint64_t universe_size) {
    if (params.delta <= 0.0 || params.delta >= 1.0)
        throw std::invalid_argument("delta must be in (0, 1)");
    if (params.k == 0 || params.alpha == 0)
        throw std::invalid_argument("k and alpha must be positive");

    TradeoffAdversaryResolved r;
    const double d = params.delta;
    const double exponent = 8.0 * d * d * static_cast<double>(params.alpha) / (1.0 - d);
    const double s_default = 16.0 * std::exp(exponent);
    r.theoretical_universe = 16.0 * static_cast<double>(params.k) * std::exp(exponent);

    if (params.s_override) {
        if (*params.s_override == 0) throw std::invalid_argument("s must be >= 1");
        r.s = *params.s_override;
    } else {
        if (!(s_default < 9e18)) throw std::invalid_argument("default s overflows; use s_override");
        r.s = static_cast<std::uint64_t>(std::ceil(s_default));
    }
    if (params.t_override) {
        if (*params.t_override == 0) throw std::invalid_argument("t must be >= 1");
        r.t = *params.t_override;
    } else {
        const double t_default =
            params.c * static_cast<double>(params.alpha) * static_cast<double>(r.s) *
            static_cast<double>(r.s);
        if (!(t_default < 9e18)) throw std::invalid_argument("default t overflows; use t_override");
        r.t = static_cast<std::uint64_t>(std::ceil(t_default));
    }
    r.k_prime = static_cast<std::uint64_t>(
        std::ceil((1.0 - d) * static_cast<double>(params.k)));
    r.length = r.s * r.t * r.k_prime;
    r.theoretical_universe_met =
        universe_size == 0 ? true
                           : static_cast<double>(universe_size) >= r.theoretical_universe;
    return r;
}

Trace tradeoff_adversary(const TradeoffAdversaryParams& params, ItemId universe_start,
                         std::uint64_t universe_size, std::uint64_t length_budget) {
    const TradeoffAdversaryResolved r = resolve_tradeoff_adversary(params, universe_size);
    const std::uint64_t items_needed = r.s * r.k_prime;
    if (universe_size != 0 && items_needed > universe_size)
        throw std::invalid_argument("universe too small: adversary needs " +
                                    std::to_string(items_needed) + " items");
    if (r.length > length_budget)
        throw std::invalid_argument("adversary trace would have " + std::to_string(r.length) +
                                    " requests; raise the length budget or override s/t");
    Trace trace;
    trace.reserve(r.length);
    for (std::uint64_t i = 0; i < r.s; ++i) {
        const ItemId base = universe_start + i * r.k_prime;
        for (std::uint64_t rep = 0; rep < r.t; ++rep)
            for (std::uint64_t j = 0; j < r.k_prime; ++j) trace.push_back(base + j);
    }
    return trace;
}

Trace fixed_set_cycler(std::uint64_t k_prime, std::uint64_t repetitions, ItemId universe_start) {
    if (k_prime == 0 || repetitions == 0)
        throw std::invalid_argument("k_prime and repetitions must be >= 1");
    Trace trace;
    trace.reserve(k_prime * repetitions);
    for (std::uint64_t rep = 0; rep < repetitions; ++rep)
        for (std::uint64_t j = 0; j < k_prime; ++j) trace.push_back(universe_start + j);
    return trace;
}

Trace zipf_trace(std::uint64_t universe_size, double exponent, std::uint64_t length,
                 std::uint64_t seed, ItemId universe_start) {
    if (universe_size == 0) throw std::invalid_argument("universe must be >= 1");
    if (exponent < 0.0) throw std::invalid_argument("exponent must be >= 0");
    // Cumulative weights of p_i ~ 1/i^exponent, searched per draw.
    std::vector<double> cdf(universe_size);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < universe_size; ++i) {
        acc += std::pow(static_cast<double>(i + 1), -exponent);
        cdf[i] = acc;
    }
    const double total = acc;
    Trace trace;
    trace.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) {
        const double u = rng::to_unit_double(rng::at(seed, i)) * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t rank =
            it == cdf.end() ? universe_size - 1
                            : static_cast<std::uint64_t>(it - cdf.begin());
        trace.push_back(universe_start + rank);
    }
    return trace;
}

} // namespace pagelab
