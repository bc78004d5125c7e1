#include "pagelab/set_assoc.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pagelab/rng.hpp"

namespace pagelab {

HashIndexer::HashIndexer(std::uint64_t seed, std::uint32_t bucket_count)
    : seed_(seed), bucket_count_(bucket_count) {
    if (bucket_count == 0) throw std::invalid_argument("bucket count must be >= 1");
}

std::uint32_t HashIndexer::bucket(ItemId item) const {
    auto it = memo_.find(item);
    if (it != memo_.end()) return it->second;
    const std::uint32_t b =
        static_cast<std::uint32_t>(rng::at(seed_, item) % bucket_count_);
    memo_.emplace(item, b);
    return b;
}

std::string to_string(RehashMode mode) {
    switch (mode) {
        case RehashMode::None: return "NONE";
        case RehashMode::FullFlush: return "FULL-FLUSH";
        case RehashMode::Incremental: return "INCREMENTAL";
    }
    return "?";
}

RehashMode parse_rehash_mode(const std::string& text) {
    if (text == "NONE" || text == "none") return RehashMode::None;
    if (text == "FULL-FLUSH" || text == "full-flush") return RehashMode::FullFlush;
    if (text == "INCREMENTAL" || text == "incremental") return RehashMode::Incremental;
    throw std::invalid_argument("unknown rehash mode: " + text);
}

SetAssocCache::SetAssocCache(std::size_t k, std::size_t alpha, PolicyKind kind,
                             std::uint64_t seed, RehashConfig rehash)
    : k_(k), alpha_(alpha), kind_(kind), rehash_(rehash), seed_stream_(seed) {
    if (alpha == 0) throw std::invalid_argument("alpha must be >= 1");
    if (k == 0 || k % alpha != 0)
        throw std::invalid_argument("alpha must divide k (got k=" + std::to_string(k) +
                                    ", alpha=" + std::to_string(alpha) + ")");
    if (rehash_.threshold != 0) {
        threshold_ = rehash_.threshold;
    } else {
        if (rehash_.exponent < 2.0)
            throw std::invalid_argument("rehash exponent must be >= 2");
        threshold_ = static_cast<std::uint64_t>(
            std::ceil(std::pow(static_cast<double>(k), rehash_.exponent)));
    }
    if (rehash_.mode == RehashMode::Incremental && threshold_ < k_)
        throw std::invalid_argument("incremental mode needs threshold >= k so a rehash "
                                    "finishes before the next one begins");
    const std::size_t n = k / alpha;
    active_ = HashIndexer(fresh_seed(), static_cast<std::uint32_t>(n));
    buckets_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) buckets_.emplace_back(kind_, alpha_);
}

std::uint64_t SetAssocCache::fresh_seed() { return rng::at(seed_stream_, seed_index_++); }

SaAccessOutcome SetAssocCache::access(ItemId item) {
    SaAccessOutcome out;

    // A pending item is still resident in its old bucket: this is a hit.
    // Migrate it to its new bucket (which may evict) and delete it from the
    // old one.
    if (retiring_ && pending_.count(item)) {
        old_buckets_[retiring_->bucket(item)].erase(item);
        pending_.erase(item);
        if (pending_.empty()) finish_rehash();
        AccessOutcome moved = buckets_[active_.bucket(item)].access(item);
        out.hit = true;
        out.evicted = std::move(moved.evicted);
        return out;
    }

    Policy& target = buckets_[active_.bucket(item)];
    if (target.contains(item)) {
        target.access(item);
        out.hit = true;
        return out;
    }

    // Demand miss.
    ++misses_;
    ++miss_counter_;
    const bool fire = rehash_.mode != RehashMode::None && miss_counter_ >= threshold_;
    if (fire) miss_counter_ = 0;

    if (fire && rehash_.mode == RehashMode::FullFlush) {
        flush_all(out.rehash_evicted);
        ++rehashes_;
        buckets_[active_.bucket(item)].access(item);
        return out;
    }

    if (fire && rehash_.mode == RehashMode::Incremental) {
        // With threshold >= k the previous rehash has always drained by now;
        // drain any leftovers before starting over so at most two indexers
        // ever exist.
        while (retiring_)
            if (auto v = incremental_evict_step()) out.rehash_evicted.push_back(*v);
        begin_incremental_rehash();
        ++rehashes_;
    }

    AccessOutcome o = buckets_[active_.bucket(item)].access(item);
    out.evicted = std::move(o.evicted);

    if (retiring_)
        if (auto v = incremental_evict_step()) out.rehash_evicted.push_back(*v);
    return out;
}

void SetAssocCache::flush_all(std::vector<ItemId>& out) {
    for (ItemId x : contents()) out.push_back(x);
    const std::size_t n = buckets_.size();
    buckets_.clear();
    for (std::size_t i = 0; i < n; ++i) buckets_.emplace_back(kind_, alpha_);
    retiring_.reset();
    old_buckets_.clear();
    pending_.clear();
    active_ = HashIndexer(fresh_seed(), static_cast<std::uint32_t>(n));
}

std::vector<ItemId> SetAssocCache::trigger_full_flush() {
    if (rehash_.mode != RehashMode::FullFlush)
        throw std::logic_error("trigger_full_flush requires FULL-FLUSH mode");
    std::vector<ItemId> flushed;
    flush_all(flushed);
    ++rehashes_;
    miss_counter_ = 0;
    return flushed;
}

void SetAssocCache::begin_incremental_rehash() {
    if (rehash_.mode != RehashMode::Incremental)
        throw std::logic_error("begin_incremental_rehash requires INCREMENTAL mode");
    if (retiring_)
        throw std::logic_error("a rehash is already in progress");
    pending_ = contents();
    const std::size_t n = buckets_.size();
    retiring_ = active_;
    old_buckets_ = std::move(buckets_);
    buckets_.clear();
    for (std::size_t i = 0; i < n; ++i) buckets_.emplace_back(kind_, alpha_);
    active_ = HashIndexer(fresh_seed(), static_cast<std::uint32_t>(n));
    if (pending_.empty()) finish_rehash();
}

std::optional<ItemId> SetAssocCache::incremental_evict_step() {
    if (!retiring_) return std::nullopt;
    assert(!pending_.empty());
    const ItemId victim = *pending_.begin();
    old_buckets_[retiring_->bucket(victim)].erase(victim);
    pending_.erase(pending_.begin());
    if (pending_.empty()) finish_rehash();
    return victim;
}

void SetAssocCache::finish_rehash() {
    retiring_.reset();
    old_buckets_.clear();
    pending_.clear();
}

std::set<ItemId> SetAssocCache::contents() const {
    std::set<ItemId> all;
    for (const Policy& b : buckets_) all.insert(b.contents().begin(), b.contents().end());
    for (const Policy& b : old_buckets_) all.insert(b.contents().begin(), b.contents().end());
    return all;
}

bool SetAssocCache::contains(ItemId item) const {
    if (buckets_[active_.bucket(item)].contains(item)) return true;
    return retiring_ && pending_.count(item) != 0;
}

PairRunReport run_pair(const Trace& trace, SetAssocCache& test, PolicyKind ref_kind,
                       std::size_t ref_capacity, bool keep_log) {
    Policy ref(ref_kind, ref_capacity);
    PairRunReport r;
    if (keep_log) r.log.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const ItemId x = trace[i];
        const bool ref_hit = ref.access(x).hit;
        if (!ref_hit) ++r.misses_ref;
        const SaAccessOutcome out = test.access(x);
        if (!out.hit) ++r.misses_test;
        bool bad = false;
        for (ItemId v : out.evicted)
            if (ref.contains(v)) {
                ++r.bad_evictions;
                bad = true;
            }
        r.flush_evictions += out.rehash_evicted.size();
        if (r.misses_test > r.misses_ref + r.bad_evictions + r.flush_evictions) {
            if (r.ledger_violations == 0) r.first_violation_at = i;
            ++r.ledger_violations;
        }
        if (keep_log) r.log.push_back({out.hit, ref_hit, bad});
    }
    return r;
}

} // namespace pagelab
