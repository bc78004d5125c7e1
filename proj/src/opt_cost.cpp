#include "pagelab/opt_cost.hpp"

#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace pagelab {

std::uint64_t compute_opt_cost(const Trace& trace, std::size_t k) {
    if (k == 0) throw std::invalid_argument("cache capacity must be >= 1");
    const std::size_t n = trace.size();
    constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

    // next[i]: position of the next request for trace[i], or kNever.
    std::vector<std::uint64_t> next(n);
    std::unordered_map<ItemId, std::uint64_t> upcoming;
    for (std::size_t i = n; i-- > 0;) {
        auto it = upcoming.find(trace[i]);
        next[i] = it == upcoming.end() ? kNever : it->second;
        upcoming[trace[i]] = i;
    }

    // Residents keyed by (next use, id): the victim is the max element, which
    // realizes "furthest in future; never-used first, then largest id".
    std::set<std::pair<std::uint64_t, ItemId>> order;
    std::unordered_map<ItemId, std::uint64_t> next_of;
    std::uint64_t misses = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ItemId x = trace[i];
        auto it = next_of.find(x);
        if (it != next_of.end()) {
            order.erase({it->second, x});
        } else {
            ++misses;
            if (next_of.size() == k) {
                const auto victim = *order.rbegin();
                order.erase(victim);
                next_of.erase(victim.second);
            }
        }
        next_of[x] = next[i];
        order.insert({next[i], x});
    }
    return misses;
}

} // namespace pagelab
