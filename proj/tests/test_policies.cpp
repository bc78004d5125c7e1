#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "pagelab/policy.hpp"
#include "pagelab/rng.hpp"

using namespace pagelab;

namespace {

constexpr ItemId A = 0, B = 1, C = 2, D = 3, Y = 3, Z = 4;

Trace random_trace(std::uint64_t seed, std::size_t len, std::uint64_t universe) {
    rng::SplitMix64 g(seed);
    Trace t(len);
    for (auto& x : t) x = g.next_below(universe);
    return t;
}

// Test-only reference simulators, written independently of Policy's
// bookkeeping so the derived expectations below have a second source.
std::uint64_t oracle_lru_misses(std::size_t capacity, const Trace& trace,
                                std::vector<ItemId>* final_contents = nullptr) {
    std::vector<ItemId> stack; // most recent at the back
    std::uint64_t misses = 0;
    for (ItemId x : trace) {
        auto it = std::find(stack.begin(), stack.end(), x);
        if (it != stack.end()) {
            stack.erase(it);
        } else {
            ++misses;
            if (stack.size() == capacity) stack.erase(stack.begin());
        }
        stack.push_back(x);
    }
    if (final_contents) *final_contents = stack;
    return misses;
}

std::set<ItemId> oracle_lfu_contents(std::size_t capacity, const Trace& trace) {
    std::map<ItemId, std::uint64_t> counts;
    std::set<ItemId> cache;
    for (ItemId x : trace) {
        ++counts[x];
        if (cache.count(x)) continue;
        if (cache.size() == capacity) {
            // evict the least-frequent resident, largest id on ties
            ItemId victim = *cache.begin();
            for (ItemId y : cache) {
                if (counts[y] < counts[victim] || (counts[y] == counts[victim] && y > victim))
                    victim = y;
            }
            cache.erase(victim);
        }
        cache.insert(x);
    }
    return cache;
}

std::vector<ItemId> sorted_contents(const Policy& p) {
    return {p.contents().begin(), p.contents().end()};
}

} // namespace

TEST_CASE("construction and basic invariants") {
    Policy p(PolicyKind::lru(), 3);
    CHECK(p.contents().empty());
    CHECK(p.clock() == 0);
    CHECK_THROWS_AS(Policy(PolicyKind::lru(), 0), std::invalid_argument);
    CHECK_THROWS_AS(PolicyKind::lru_k(0), std::invalid_argument);
}

TEST_CASE("kind names parse back") {
    for (auto kind : {PolicyKind::lru(), PolicyKind::lru_k(2), PolicyKind::lru_k(7),
                      PolicyKind::lfu(), PolicyKind::fifo(), PolicyKind::clock(),
                      PolicyKind::flush_when_full(), PolicyKind::reuse_distance()}) {
        CHECK(PolicyKind::parse(kind.name()) == kind);
    }
    CHECK_THROWS_AS(PolicyKind::parse("LRU-x"), std::invalid_argument);
}

TEST_CASE("LRU-1 behaves identically to LRU on every trace") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Trace t = random_trace(seed, 200, 6);
        const auto a = replay(PolicyKind::lru(), 4, t);
        const auto b = replay(PolicyKind::lru_k(1), 4, t);
        REQUIRE(a.outcomes == b.outcomes);
        REQUIRE(a.final_contents == b.final_contents);
    }
}

TEST_CASE("FLUSH-WHEN-FULL evicts everything when full") {
    Policy p(PolicyKind::flush_when_full(), 2);
    p.access(A);
    p.access(B);
    const auto out = p.access(C);
    CHECK_FALSE(out.hit);
    CHECK(out.evicted == std::vector<ItemId>{A, B});
    CHECK(sorted_contents(p) == std::vector<ItemId>{C});
}

TEST_CASE("LRU evicts the least recent resident") {
    Policy p(PolicyKind::lru(), 3);
    for (ItemId x : {A, B, C}) p.access(x);
    const auto out = p.access(D);
    CHECK_FALSE(out.hit);
    CHECK(out.evicted == std::vector<ItemId>{A});
}

TEST_CASE("reuse distance evicts the stalest reuse gap") {
    // A Y A B Y Y B then C: gaps are Y=0, A=1, B=2, so B goes.
    Policy p(PolicyKind::reuse_distance(), 3);
    for (ItemId x : {A, Y, A, B, Y, Y, B}) p.access(x);
    const auto out = p.access(C);
    CHECK_FALSE(out.hit);
    CHECK(out.evicted == std::vector<ItemId>{B});
}

TEST_CASE("LFU breaks count ties toward the larger id") {
    Policy p(PolicyKind::lfu(), 2);
    p.access(B);
    p.access(C);
    const auto out = p.access(A);
    CHECK_FALSE(out.hit);
    CHECK(out.evicted == std::vector<ItemId>{C});
}

TEST_CASE("contents after short traces") {
    Policy lru(PolicyKind::lru(), 2);
    for (ItemId x : {A, B, A, C}) lru.access(x);
    CHECK(sorted_contents(lru) == std::vector<ItemId>{A, C});

    Policy lfu(PolicyKind::lfu(), 2);
    const Trace t{A, A, B, C};
    for (ItemId x : t) lfu.access(x);
    CHECK(lfu.contents() == oracle_lfu_contents(2, t));
    CHECK(sorted_contents(lfu) == std::vector<ItemId>{A, C});
}

TEST_CASE("rank keys: recency distance") {
    Policy p(PolicyKind::lru(), 16);
    // six fillers, then A at clock 7, then three more requests: phi(A) = 3
    for (ItemId x : {10, 11, 12, 13, 14, 15}) p.access(x);
    p.access(A);
    for (ItemId x : {10, 11, 12}) p.access(x);
    const RankKey key = p.eviction_rank_key(A);
    CHECK_FALSE(key.unaccessed);
    CHECK_FALSE(key.infinite);
    CHECK(key.phi == 3);
}

TEST_CASE("rank keys: LRU-2 is infinite after one access") {
    Policy p(PolicyKind::lru_k(2), 4);
    p.access(A);
    CHECK(p.eviction_rank_key(A).infinite);
    p.access(A);
    CHECK_FALSE(p.eviction_rank_key(A).infinite);
    CHECK(p.eviction_rank_key(A).phi == 1); // clock 2 minus first access at 1
}

TEST_CASE("rank keys: reuse order after the scripted trace") {
    Policy p(PolicyKind::reuse_distance(), 8);
    for (ItemId x : {A, Y, A, B, Y, Y, B, C}) p.access(x);
    const auto ka = p.eviction_rank_key(A);
    const auto kb = p.eviction_rank_key(B);
    const auto ky = p.eviction_rank_key(Y);
    CHECK(rank_less(ky, ka));
    CHECK(rank_less(ka, kb));
}

TEST_CASE("rank keys: unaccessed items rank last by id") {
    Policy p(PolicyKind::lru(), 4);
    p.access(A);
    const auto ka = p.eviction_rank_key(A);
    const auto k8 = p.eviction_rank_key(8);
    const auto k9 = p.eviction_rank_key(9);
    CHECK(rank_less(ka, k8));
    CHECK(rank_less(k8, k9));
}

TEST_CASE("rank keys: unsupported kinds") {
    for (auto kind : {PolicyKind::fifo(), PolicyKind::clock(), PolicyKind::flush_when_full()}) {
        Policy p(kind, 2);
        p.access(A);
        CHECK_THROWS_AS(p.eviction_rank_key(A), std::invalid_argument);
    }
}

TEST_CASE("erase semantics") {
    Policy p(PolicyKind::lru(), 2);
    CHECK_FALSE(p.erase(A));
    p.access(A);
    p.access(B);
    CHECK(p.erase(A));
    CHECK(sorted_contents(p) == std::vector<ItemId>{B});
    // lazy: the next miss must not evict while the cache is below capacity
    auto out = p.access(C);
    CHECK_FALSE(out.hit);
    CHECK(out.evicted.empty());
    // erase then re-access: a miss, and the item re-enters
    CHECK(p.erase(C));
    out = p.access(C);
    CHECK_FALSE(out.hit);
    CHECK(p.contains(C));
}

TEST_CASE("erase keeps history") {
    Policy p(PolicyKind::lfu(), 2);
    p.access(A);
    p.access(A);
    p.access(A);
    CHECK(p.erase(A));
    CHECK(p.eviction_rank_key(A).phi == 3);
}

TEST_CASE("replay miss counts") {
    CHECK(replay(PolicyKind::lru(), 3, {A, B, C, A, B, C}).misses == 3);
    const Trace cyc{A, B, C, D, A, B, C, D};
    CHECK(replay(PolicyKind::lru(), 3, cyc).misses == 8);
    CHECK(oracle_lru_misses(3, cyc) == 8);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Trace t = random_trace(seed, 300, 8);
        CHECK(replay(PolicyKind::lru(), 4, t).misses == oracle_lru_misses(4, t));
    }
}

TEST_CASE("FIFO can miss more on the larger cache") {
    const Trace t{1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5};
    CHECK(replay(PolicyKind::fifo(), 3, t).misses == 9);
    CHECK(replay(PolicyKind::fifo(), 4, t).misses == 10);
}

TEST_CASE("CLOCK second chance") {
    Policy p(PolicyKind::clock(), 3);
    for (ItemId x : {A, B, C}) p.access(x);
    // all bits set on load; the scan clears them, wraps, and takes slot 0
    auto out = p.access(D);
    CHECK(out.evicted == std::vector<ItemId>{A});
    // bits now clear on B and C; a hit on C protects it, so B goes next
    p.access(C);
    out = p.access(4);
    CHECK(out.evicted == std::vector<ItemId>{B});
    CHECK(p.contains(C));
    CHECK(p.contains(D));
}

TEST_CASE("laziness on random traces") {
    for (auto kind : {PolicyKind::lru(), PolicyKind::lru_k(2), PolicyKind::lfu(),
                      PolicyKind::fifo(), PolicyKind::clock(), PolicyKind::reuse_distance()}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Trace t = random_trace(seed, 200, 8);
            Policy p(kind, 3);
            std::size_t size = 0;
            for (ItemId x : t) {
                const bool was_full = size == 3;
                const auto out = p.access(x);
                REQUIRE(out.evicted.size() <= 1);
                if (!out.evicted.empty()) {
                    REQUIRE(was_full);
                    REQUIRE_FALSE(out.hit);
                }
                size = p.contents().size();
            }
        }
    }
}

TEST_CASE("evictions take the rank-maximal resident") {
    for (auto kind : {PolicyKind::lru(), PolicyKind::lru_k(2), PolicyKind::lfu(),
                      PolicyKind::reuse_distance()}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Trace t = random_trace(seed + 100, 200, 8);
            Policy p(kind, 3);
            for (ItemId x : t) {
                const auto before = p.contents();
                const auto out = p.access(x);
                if (out.evicted.empty()) continue;
                const ItemId victim = out.evicted.front();
                const RankKey vk = p.eviction_rank_key(victim);
                for (ItemId other : before)
                    if (other != victim) REQUIRE(rank_less(p.eviction_rank_key(other), vk));
            }
        }
    }
}

TEST_CASE("rank order is a strict total order") {
    for (auto kind : {PolicyKind::lru_k(2), PolicyKind::lfu(), PolicyKind::reuse_distance()}) {
        Policy p(kind, 8);
        for (ItemId x : random_trace(7, 60, 5)) p.access(x);
        std::vector<RankKey> keys;
        for (ItemId i = 0; i < 8; ++i) keys.push_back(p.eviction_rank_key(i));
        for (std::size_t i = 0; i < keys.size(); ++i)
            for (std::size_t j = 0; j < keys.size(); ++j) {
                if (i == j) {
                    REQUIRE_FALSE(rank_less(keys[i], keys[j]));
                } else {
                    REQUIRE(rank_less(keys[i], keys[j]) != rank_less(keys[j], keys[i]));
                }
            }
        // transitivity via sort consistency
        std::vector<std::size_t> order(keys.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return rank_less(keys[a], keys[b]); });
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            REQUIRE(rank_less(keys[order[i]], keys[order[i + 1]]));
    }
}

TEST_CASE("stack inclusion for order-family kinds") {
    for (auto kind : {PolicyKind::lru(), PolicyKind::lru_k(2), PolicyKind::lfu(),
                      PolicyKind::reuse_distance()}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Trace t = random_trace(seed + 900, 150, 6);
            Policy small(kind, 3), big(kind, 4);
            for (ItemId x : t) {
                small.access(x);
                big.access(x);
                for (ItemId r : small.contents()) REQUIRE(big.contains(r));
            }
        }
    }
}

TEST_CASE("replays are deterministic") {
    for (auto kind : {PolicyKind::lru(), PolicyKind::lfu(), PolicyKind::clock(),
                      PolicyKind::fifo(), PolicyKind::flush_when_full(),
                      PolicyKind::reuse_distance()}) {
        const Trace t = random_trace(42, 500, 10);
        const auto a = replay(kind, 4, t);
        const auto b = replay(kind, 4, t);
        REQUIRE(a.outcomes == b.outcomes);
        REQUIRE(a.final_contents == b.final_contents);
        REQUIRE(a.misses == b.misses);
    }
}
