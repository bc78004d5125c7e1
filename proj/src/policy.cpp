#include "pagelab/policy.hpp"

#include <algorithm>
#include <cassert>

namespace pagelab {

PolicyKind PolicyKind::lru_k(unsigned k) {
    if (k == 0) throw std::invalid_argument("LRU-K requires K >= 1");
    return {PolicyTag::LruK, k};
}

std::string PolicyKind::name() const {
    switch (tag) {
        case PolicyTag::Lru: return "LRU";
        case PolicyTag::LruK: return "LRU-" + std::to_string(depth);
        case PolicyTag::Lfu: return "LFU";
        case PolicyTag::Fifo: return "FIFO";
        case PolicyTag::Clock: return "CLOCK";
        case PolicyTag::FlushWhenFull: return "FLUSH-WHEN-FULL";
        case PolicyTag::ReuseDistance: return "REUSE-DISTANCE";
    }
    return "?";
}

PolicyKind PolicyKind::parse(const std::string& text) {
    if (text == "LRU") return lru();
    if (text == "LFU") return lfu();
    if (text == "FIFO") return fifo();
    if (text == "CLOCK") return clock();
    if (text == "FLUSH-WHEN-FULL" || text == "FWF") return flush_when_full();
    if (text == "REUSE-DISTANCE" || text == "REUSE") return reuse_distance();
    if (text.rfind("LRU-", 0) == 0) {
        const std::string num = text.substr(4);
        if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos)
            return lru_k(static_cast<unsigned>(std::stoul(num)));
    }
    throw std::invalid_argument("unknown policy kind: " + text);
}

bool rank_less(const RankKey& a, const RankKey& b) {
    if (a.unaccessed != b.unaccessed) return b.unaccessed;
    if (!a.unaccessed) {
        if (a.infinite != b.infinite) return b.infinite;
        if (!a.infinite && a.phi != b.phi)
            return a.larger_phi_first ? a.phi > b.phi : a.phi < b.phi;
    }
    return a.tiebreak < b.tiebreak;
}

Policy::Policy(PolicyKind kind, std::size_t capacity)
    : kind_(kind),
      capacity_(capacity),
      recent_depth_(std::max(2u, kind.tag == PolicyTag::LruK ? kind.depth : 1u)) {
    if (capacity == 0) throw std::invalid_argument("cache capacity must be >= 1");
}

Policy Policy::corrupted_min_evict(PolicyKind kind, std::size_t capacity) {
    Policy p(kind, capacity);
    p.evict_minimal_ = true;
    return p;
}

AccessOutcome Policy::access(ItemId item) {
    ++clock_;
    History& h = history_[item];
    ++h.count;
    h.recent.push_back(clock_);
    if (h.recent.size() > recent_depth_) h.recent.erase(h.recent.begin());

    AccessOutcome out;
    if (resident_.count(item)) {
        out.hit = true;
        switch (kind_.tag) {
            case PolicyTag::Lru:
                recency_.splice(recency_.begin(), recency_, where_[item]);
                break;
            case PolicyTag::Clock:
                slots_[slot_of_[item]].referenced = true;
                break;
            default:
                break;
        }
        return out;
    }

    if (resident_.size() == capacity_) {
        if (kind_.tag == PolicyTag::FlushWhenFull) {
            out.evicted.assign(resident_.begin(), resident_.end());
            resident_.clear();
        } else if (kind_.tag == PolicyTag::Clock) {
            while (slots_[hand_].referenced) {
                slots_[hand_].referenced = false;
                hand_ = (hand_ + 1) % slots_.size();
            }
            const ItemId victim = slots_[hand_].item;
            out.evicted.push_back(victim);
            resident_.erase(victim);
            slot_of_.erase(victim);
            // The faulting access counts as a reference, so the page comes in
            // with its bit set; without this a fresh page can be evicted on
            // the very next miss, which breaks conservativeness.
            slots_[hand_] = {item, true};
            slot_of_[item] = hand_;
            hand_ = (hand_ + 1) % slots_.size();
            resident_.insert(item);
            h.admitted_at = clock_;
            return out;
        } else {
            const ItemId victim = select_victim();
            out.evicted.push_back(victim);
            resident_.erase(victim);
            if (kind_.tag == PolicyTag::Lru) {
                recency_.erase(where_[victim]);
                where_.erase(victim);
            }
        }
    }
    admit(item, h);
    return out;
}

void Policy::admit(ItemId item, History& h) {
    resident_.insert(item);
    h.admitted_at = clock_;
    switch (kind_.tag) {
        case PolicyTag::Lru:
            recency_.push_front(item);
            where_[item] = recency_.begin();
            break;
        case PolicyTag::Clock:
            slots_.push_back({item, true});
            slot_of_[item] = slots_.size() - 1;
            break;
        default:
            break;
    }
}

ItemId Policy::select_victim() const {
    assert(!resident_.empty());
    switch (kind_.tag) {
        case PolicyTag::Lru:
            return evict_minimal_ ? recency_.front() : recency_.back();
        case PolicyTag::Fifo: {
            ItemId best = *resident_.begin();
            std::uint64_t best_stamp = history_.at(best).admitted_at;
            for (ItemId x : resident_) {
                const std::uint64_t s = history_.at(x).admitted_at;
                if (s < best_stamp) {
                    best = x;
                    best_stamp = s;
                }
            }
            return best;
        }
        case PolicyTag::LruK:
        case PolicyTag::Lfu:
        case PolicyTag::ReuseDistance: {
            ItemId best = *resident_.begin();
            RankKey best_key = eviction_rank_key(best);
            for (ItemId x : resident_) {
                const RankKey k = eviction_rank_key(x);
                const bool better = evict_minimal_ ? rank_less(k, best_key) : rank_less(best_key, k);
                if (better) {
                    best = x;
                    best_key = k;
                }
            }
            return best;
        }
        default:
            throw std::logic_error("select_victim: unhandled kind");
    }
}

bool Policy::erase(ItemId item) {
    auto it = resident_.find(item);
    if (it == resident_.end()) return false;
    resident_.erase(it);
    switch (kind_.tag) {
        case PolicyTag::Lru: {
            recency_.erase(where_[item]);
            where_.erase(item);
            break;
        }
        case PolicyTag::Clock: {
            const std::size_t idx = slot_of_[item];
            slot_of_.erase(item);
            slots_.erase(slots_.begin() + static_cast<std::ptrdiff_t>(idx));
            for (auto& [x, s] : slot_of_)
                if (s > idx) --s;
            if (hand_ > idx) --hand_;
            if (hand_ >= slots_.size()) hand_ = 0;
            break;
        }
        default:
            break;
    }
    return true;
}

RankKey Policy::eviction_rank_key(ItemId item) const {
    RankKey key;
    key.tiebreak = item;
    key.larger_phi_first = kind_.tag == PolicyTag::Lfu;

    const auto it = history_.find(item);
    if (it == history_.end() || it->second.count == 0) {
        key.unaccessed = true;
        return key;
    }
    const History& h = it->second;
    key.unaccessed = false;

    switch (kind_.tag) {
        case PolicyTag::Lru:
        case PolicyTag::LruK: {
            const unsigned k = kind_.tag == PolicyTag::Lru ? 1u : kind_.depth;
            if (h.count < k) {
                key.infinite = true;
            } else {
                // k-th most recent access; `recent` holds at least k stamps then.
                key.phi = clock_ - h.recent[h.recent.size() - k];
            }
            return key;
        }
        case PolicyTag::Lfu:
            key.phi = h.count;
            return key;
        case PolicyTag::ReuseDistance: {
            if (h.count < 2) {
                key.infinite = true;
            } else {
                const std::uint64_t last = h.recent[h.recent.size() - 1];
                const std::uint64_t prev = h.recent[h.recent.size() - 2];
                key.phi = last - prev - 1; // requests strictly between the two
            }
            return key;
        }
        default:
            throw std::invalid_argument("policy kind " + kind_.name() + " has no order family");
    }
}

ReplayResult replay(PolicyKind kind, std::size_t capacity, const Trace& trace) {
    Policy p(kind, capacity);
    ReplayResult r;
    r.outcomes.reserve(trace.size());
    for (ItemId x : trace) {
        AccessOutcome out = p.access(x);
        if (!out.hit) ++r.misses;
        r.outcomes.push_back(std::move(out));
    }
    r.final_contents = p.contents();
    return r;
}

std::uint64_t replay_misses(PolicyKind kind, std::size_t capacity, const Trace& trace) {
    Policy p(kind, capacity);
    std::uint64_t misses = 0;
    for (ItemId x : trace)
        if (!p.access(x).hit) ++misses;
    return misses;
}

Trace restrict_to(const Trace& trace, const std::vector<ItemId>& keep) {
    Trace out;
    out.reserve(trace.size());
    for (ItemId x : trace)
        if (std::binary_search(keep.begin(), keep.end(), x)) out.push_back(x);
    return out;
}

std::size_t distinct_items(const Trace& trace) {
    std::set<ItemId> s(trace.begin(), trace.end());
    return s.size();
}

} // namespace pagelab
