#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pagelab/adversary.hpp"
#include "pagelab/policy.hpp"
#include "pagelab/set_assoc.hpp"

using namespace pagelab;

TEST_CASE("smallest composition: one set scanned twice") {
    TradeoffAdversaryParams p;
    p.k = 6;
    p.alpha = 2;
    p.delta = 0.5; // k' = 3
    p.s_override = 1;
    p.t_override = 2;
    const Trace t = tradeoff_adversary(p, 0);
    CHECK(t == Trace{0, 1, 2, 0, 1, 2});
}

TEST_CASE("default parameter formulas") {
    TradeoffAdversaryParams p;
    p.k = 64;
    p.alpha = 2;
    p.delta = 0.5;
    p.c = 1.0;
    const auto r = resolve_tradeoff_adversary(p);
    // s = ceil(16 e^8), t = ceil(c * alpha * s^2), k' = 32
    CHECK(r.s == 47696);
    CHECK(r.t == 4549816832ULL);
    CHECK(r.k_prime == 32);
    CHECK(r.length == r.s * r.t * r.k_prime);
    CHECK(r.theoretical_universe == doctest::Approx(16.0 * 64.0 * std::exp(8.0)));
    // the default trace is astronomically long; materialization refuses
    CHECK_THROWS_AS(tradeoff_adversary(p, 0), std::invalid_argument);
}

TEST_CASE("universe accounting") {
    TradeoffAdversaryParams p;
    p.k = 8;
    p.alpha = 2;
    p.delta = 0.5; // k' = 4
    p.s_override = 3;
    p.t_override = 1;
    CHECK_THROWS_AS(tradeoff_adversary(p, 0, 11), std::invalid_argument); // needs 12 ids
    const auto r = resolve_tradeoff_adversary(p, 12);
    CHECK_FALSE(r.theoretical_universe_met); // overrides stay below 16k e^...
    CHECK(tradeoff_adversary(p, 0, 12).size() == 12);
}

TEST_CASE("phases are disjoint and the length law holds") {
    TradeoffAdversaryParams p;
    p.k = 16;
    p.alpha = 4;
    p.delta = 0.25; // k' = 12
    p.s_override = 5;
    p.t_override = 3;
    const Trace t = tradeoff_adversary(p, 100);
    const auto r = resolve_tradeoff_adversary(p);
    CHECK(t.size() == r.s * r.t * r.k_prime);
    std::vector<std::set<ItemId>> phase_sets(r.s);
    const std::uint64_t phase_len = r.t * r.k_prime;
    for (std::size_t i = 0; i < t.size(); ++i) phase_sets[i / phase_len].insert(t[i]);
    for (std::size_t i = 0; i < phase_sets.size(); ++i) {
        CHECK(phase_sets[i].size() == r.k_prime);
        for (std::size_t j = i + 1; j < phase_sets.size(); ++j)
            for (ItemId x : phase_sets[i]) CHECK_FALSE(phase_sets[j].count(x));
    }
}

TEST_CASE("reference cost law: LRU at k' pays only cold misses") {
    TradeoffAdversaryParams p;
    p.k = 32;
    p.alpha = 4;
    p.delta = 0.5; // k' = 16
    p.s_override = 4;
    p.t_override = 5;
    const Trace t = tradeoff_adversary(p, 0);
    const auto r = resolve_tradeoff_adversary(p);
    CHECK(replay_misses(PolicyKind::lru(), r.k_prime, t) == r.s * r.k_prime);
    CHECK(replay_misses(PolicyKind::fifo(), r.k_prime, t) == r.s * r.k_prime);
}

TEST_CASE("fixed set cycler") {
    CHECK(fixed_set_cycler(2, 3, 0) == Trace{0, 1, 0, 1, 0, 1});
    const Trace t = fixed_set_cycler(7, 9, 100);
    CHECK(t.size() == 63);
    CHECK(replay_misses(PolicyKind::lru(), 7, t) == 7);
    CHECK(replay_misses(PolicyKind::lru(), 12, t) == 7);
}

TEST_CASE("an overloaded bucket thrashes linearly in the repetitions") {
    // find a seed whose indexer drops at least alpha+1 of the k' items into
    // one bucket, then check the per-cycle miss count exactly
    const std::size_t k = 8, alpha = 2, k_prime = 6;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> loads;
    for (;; ++seed) {
        SetAssocCache probe(k, alpha, PolicyKind::lru(), seed);
        loads.assign(k / alpha, 0);
        for (ItemId x = 0; x < k_prime; ++x) ++loads[probe.active_bucket_of(x)];
        if (*std::max_element(loads.begin(), loads.end()) > alpha) break;
    }
    std::uint64_t thrash_per_cycle = 0;
    for (std::uint64_t l : loads)
        if (l > alpha) thrash_per_cycle += l;

    auto misses_at = [&](std::uint64_t reps) {
        SetAssocCache sa(k, alpha, PolicyKind::lru(), seed);
        std::uint64_t misses = 0;
        for (ItemId x : fixed_set_cycler(k_prime, reps, 0))
            if (!sa.access(x).hit) ++misses;
        return misses;
    };
    const std::uint64_t m20 = misses_at(20), m40 = misses_at(40);
    CHECK(m40 - m20 == 20 * thrash_per_cycle);
    CHECK(m20 > k_prime); // conflict misses beyond the cold ones
}

TEST_CASE("zipf determinism and degenerate uniformity") {
    const Trace a = zipf_trace(1000, 1.0, 5000, 1234);
    const Trace b = zipf_trace(1000, 1.0, 5000, 1234);
    CHECK(a == b);
    CHECK(zipf_trace(1000, 1.0, 5000, 1235) != a);

    // exponent 0: uniform; compare bucketed frequencies roughly
    const Trace u = zipf_trace(10, 0.0, 100'000, 7);
    std::vector<std::uint64_t> counts(10, 0);
    for (ItemId x : u) ++counts[x];
    for (std::uint64_t c : counts) {
        CHECK(c > 9'000);
        CHECK(c < 11'000);
    }
}

TEST_CASE("zipf rank-frequency slope matches the exponent") {
    const double exponent = 1.0;
    const Trace t = zipf_trace(10'000, exponent, 1'000'000, 99);
    std::vector<std::uint64_t> counts(10'000, 0);
    for (ItemId x : t) ++counts[x];
    // least-squares fit of log(freq) against log(rank) over the head
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int rank = 1; rank <= 100; ++rank) {
        if (counts[rank - 1] == 0) continue;
        const double x = std::log(static_cast<double>(rank));
        const double y = std::log(static_cast<double>(counts[rank - 1]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(-slope - exponent) < 0.1 * exponent);
}

TEST_CASE("generator input validation") {
    CHECK_THROWS_AS(fixed_set_cycler(0, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(zipf_trace(0, 1.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(zipf_trace(10, -1.0, 10, 1), std::invalid_argument);
    TradeoffAdversaryParams p;
    p.k = 8;
    p.alpha = 2;
    p.delta = 1.5;
    CHECK_THROWS_AS(resolve_tradeoff_adversary(p), std::invalid_argument);
}
