#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "pagelab/policy.hpp"
#include "pagelab/trace.hpp"

namespace pagelab {

// Seeded stand-in for a fully random indexing function. Bucket choices are
// memoized so the same item always lands in the same bucket for the lifetime
// of one hash epoch.
class HashIndexer {
public:
    HashIndexer() = default;
    HashIndexer(std::uint64_t seed, std::uint32_t bucket_count);

    std::uint32_t bucket(ItemId item) const;
    std::uint64_t seed() const { return seed_; }
    std::uint32_t bucket_count() const { return bucket_count_; }

private:
    std::uint64_t seed_ = 0;
    std::uint32_t bucket_count_ = 1;
    mutable std::unordered_map<ItemId, std::uint32_t> memo_;
};

enum class RehashMode { None, FullFlush, Incremental };

std::string to_string(RehashMode mode);
RehashMode parse_rehash_mode(const std::string& text);

struct RehashConfig {
    RehashMode mode = RehashMode::None;
    // Rehash every `threshold` demand misses; 0 means the default k^exponent.
    std::uint64_t threshold = 0;
    double exponent = 2.0;
};

// Outcome of one set-associative access. `evicted` holds policy-driven
// evictions (demand evictions and evictions caused by migrating a hit item
// into its new bucket); `rehash_evicted` holds evictions forced by the
// rehashing machinery (full flushes and incremental eviction steps).
struct SaAccessOutcome {
    bool hit = false;
    std::vector<ItemId> evicted;
    std::vector<ItemId> rehash_evicted;
};

// k slots split into k/alpha buckets, each run by an independent policy
// instance of capacity alpha. In INCREMENTAL mode up to two indexers are
// live at once and both are probed on every access.
class SetAssocCache {
public:
    SetAssocCache(std::size_t k, std::size_t alpha, PolicyKind kind, std::uint64_t seed,
                  RehashConfig rehash = {});

    SaAccessOutcome access(ItemId item);

    // Empties every bucket (histories reset), draws a fresh indexer, and
    // returns the flushed items. Requires FULL-FLUSH mode.
    std::vector<ItemId> trigger_full_flush();

    // Starts migrating to a fresh indexer. Requires INCREMENTAL mode and no
    // rehash in progress.
    void begin_incremental_rehash();

    // Evicts the smallest pending item from its old bucket; no-op when no
    // rehash is in progress.
    std::optional<ItemId> incremental_evict_step();

    std::set<ItemId> contents() const;
    bool contains(ItemId item) const;

    std::size_t k() const { return k_; }
    std::size_t alpha() const { return alpha_; }
    std::size_t bucket_count() const { return buckets_.size(); }
    PolicyKind kind() const { return kind_; }
    RehashMode mode() const { return rehash_.mode; }
    std::uint64_t threshold() const { return threshold_; }

    std::uint64_t misses() const { return misses_; }
    std::uint64_t rehash_count() const { return rehashes_; }
    bool rehash_in_progress() const { return retiring_.has_value(); }
    std::size_t pending_remap_count() const { return pending_.size(); }

    std::uint64_t active_seed() const { return active_.seed(); }
    std::uint32_t active_bucket_of(ItemId item) const { return active_.bucket(item); }
    const Policy& bucket(std::size_t index) const { return buckets_[index]; }

private:
    std::uint64_t fresh_seed();
    void flush_all(std::vector<ItemId>& out);
    void finish_rehash();

    std::size_t k_;
    std::size_t alpha_;
    PolicyKind kind_;
    RehashConfig rehash_;
    std::uint64_t threshold_;

    std::uint64_t seed_stream_;
    std::uint64_t seed_index_ = 0;

    HashIndexer active_;
    std::vector<Policy> buckets_;

    // Incremental-mode state: the retiring indexer, its buckets, and the
    // residents still mapped by it.
    std::optional<HashIndexer> retiring_;
    std::vector<Policy> old_buckets_;
    std::set<ItemId> pending_;

    std::uint64_t miss_counter_ = 0; // demand misses since the last rehash
    std::uint64_t misses_ = 0;
    std::uint64_t rehashes_ = 0;
};

// Lockstep comparison of a set-associative cache against a fully associative
// reference. B counts evictions of items the reference holds at that instant
// (flush-driven evictions are tallied separately, in full, as F).
struct PairRunReport {
    std::uint64_t misses_test = 0;
    std::uint64_t misses_ref = 0;
    std::uint64_t bad_evictions = 0;   // B
    std::uint64_t flush_evictions = 0; // F
    // Prefix failures of misses_test <= misses_ref + B + F. Zero by the
    // eviction-ledger argument; tracked so tests can assert it exactly.
    std::uint64_t ledger_violations = 0;
    std::size_t first_violation_at = 0;

    struct LogEntry {
        bool hit_test;
        bool hit_ref;
        bool bad_eviction;
    };
    std::vector<LogEntry> log; // filled only when requested
};

PairRunReport run_pair(const Trace& trace, SetAssocCache& test, PolicyKind ref_kind,
                       std::size_t ref_capacity, bool keep_log = false);

} // namespace pagelab
