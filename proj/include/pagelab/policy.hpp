#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pagelab/trace.hpp"

namespace pagelab {

enum class PolicyTag {
    Lru,
    LruK,
    Lfu,
    Fifo,
    Clock,
    FlushWhenFull,
    ReuseDistance,
};

struct PolicyKind {
    PolicyTag tag = PolicyTag::Lru;
    unsigned depth = 1; // K for LRU-K; ignored elsewhere

    static PolicyKind lru() { return {PolicyTag::Lru, 1}; }
    static PolicyKind lru_k(unsigned k);
    static PolicyKind lfu() { return {PolicyTag::Lfu, 1}; }
    static PolicyKind fifo() { return {PolicyTag::Fifo, 1}; }
    static PolicyKind clock() { return {PolicyTag::Clock, 1}; }
    static PolicyKind flush_when_full() { return {PolicyTag::FlushWhenFull, 1}; }
    static PolicyKind reuse_distance() { return {PolicyTag::ReuseDistance, 1}; }

    // Kinds whose evictions are driven by a per-history total order on items.
    bool has_order_family() const {
        return tag == PolicyTag::Lru || tag == PolicyTag::LruK ||
               tag == PolicyTag::Lfu || tag == PolicyTag::ReuseDistance;
    }

    std::string name() const;
    // Accepts the names produced by name(): LRU, LRU-2, LFU, FIFO, CLOCK,
    // FLUSH-WHEN-FULL, REUSE-DISTANCE. Throws std::invalid_argument otherwise.
    static PolicyKind parse(const std::string& text);

    bool operator==(const PolicyKind& o) const { return tag == o.tag && depth == o.depth; }
};

// Result of serving one request.
struct AccessOutcome {
    bool hit = false;
    // Ascending item ids. Empty on hits from single-cache policies; at most
    // one element for lazy kinds; up to the full capacity for FLUSH-WHEN-FULL.
    std::vector<ItemId> evicted;

    bool operator==(const AccessOutcome& o) const { return hit == o.hit && evicted == o.evicted; }
};

// Sort key realizing the eviction order: the policy evicts the rank-largest
// resident. `phi` is the policy's history statistic; items never requested
// rank after all requested ones, ordered among themselves by id, and phi
// ties between requested items break by ascending id.
struct RankKey {
    bool unaccessed = true;
    bool infinite = false;        // phi = infinity (too few accesses)
    std::uint64_t phi = 0;
    bool larger_phi_first = false; // polarity: LFU ranks larger phi smaller
    ItemId tiebreak = 0;
};

// Strict total order; rank_less(a, b) means a is safer from eviction than b.
bool rank_less(const RankKey& a, const RankKey& b);

// One eviction policy instance over a fixed-capacity cache. Single-owner
// mutable object; replaying a trace through it is deterministic.
class Policy {
public:
    Policy(PolicyKind kind, std::size_t capacity);

    // Negative control for conformance checks: identical bookkeeping but
    // evicts the rank-smallest resident instead of the largest.
    static Policy corrupted_min_evict(PolicyKind kind, std::size_t capacity);

    AccessOutcome access(ItemId item);

    const std::set<ItemId>& contents() const { return resident_; }
    bool contains(ItemId item) const { return resident_.count(item) != 0; }
    bool full() const { return resident_.size() == capacity_; }

    // Removes the item from residency if present (history is retained for
    // the lifetime of the instance). Returns whether it was resident.
    bool erase(ItemId item);

    // Throws std::invalid_argument for kinds without an order family.
    RankKey eviction_rank_key(ItemId item) const;

    PolicyKind kind() const { return kind_; }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t clock() const { return clock_; }

private:
    struct History {
        std::uint64_t count = 0;            // total accesses seen
        std::vector<std::uint64_t> recent;  // newest-last, capped at recent_depth_
        std::uint64_t admitted_at = 0;      // FIFO insertion stamp
    };

    ItemId select_victim() const;
    void admit(ItemId item, History& h);

    PolicyKind kind_;
    std::size_t capacity_;
    unsigned recent_depth_;
    bool evict_minimal_ = false;
    std::uint64_t clock_ = 0;
    std::set<ItemId> resident_;
    std::unordered_map<ItemId, History> history_;

    // LRU fast path: recency list, most recent at the front.
    std::list<ItemId> recency_;
    std::unordered_map<ItemId, std::list<ItemId>::iterator> where_;

    // CLOCK state: one reference bit per slot, set on hit; the hand scans
    // circularly on evictions, clearing set bits.
    struct Slot {
        ItemId item;
        bool referenced;
    };
    std::vector<Slot> slots_;
    std::size_t hand_ = 0;
    std::unordered_map<ItemId, std::size_t> slot_of_;
};

struct ReplayResult {
    std::set<ItemId> final_contents;
    std::uint64_t misses = 0;
    std::vector<AccessOutcome> outcomes;
};

// Fold access over the trace from a fresh instance.
ReplayResult replay(PolicyKind kind, std::size_t capacity, const Trace& trace);

// Misses only; skips outcome collection.
std::uint64_t replay_misses(PolicyKind kind, std::size_t capacity, const Trace& trace);

} // namespace pagelab
