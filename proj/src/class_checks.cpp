#include "pagelab/class_checks.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace pagelab {

namespace {

constexpr std::uint64_t kNoLimit = ~0ULL;

std::uint64_t space_size(unsigned u, unsigned max_len) {
    std::uint64_t total = 0;
    std::uint64_t pow = 1;
    for (unsigned len = 1; len <= max_len; ++len) {
        if (pow > kNoLimit / u) return kNoLimit;
        pow *= u;
        if (total > kNoLimit - pow) return kNoLimit;
        total += pow;
    }
    return total;
}

void require_within_budget(const SearchSpace& space) {
    if (space.universe == 0) throw std::invalid_argument("universe must be >= 1");
    const std::uint64_t n = space_size(space.universe, space.max_len);
    if (n > space.budget)
        throw BudgetExceeded("search space has " + std::to_string(n) +
                             " traces, budget is " + std::to_string(space.budget));
}

// Visits every trace of length 1..max_len over {0..u-1} in length-then-lex
// order. The visitor returns true to stop early.
template <typename F>
std::uint64_t enumerate_traces(const SearchSpace& space, F&& visit) {
    require_within_budget(space);
    const ItemId u = space.universe;
    std::uint64_t count = 0;
    Trace t;
    for (unsigned len = 1; len <= space.max_len; ++len) {
        t.assign(len, 0);
        while (true) {
            ++count;
            if (visit(static_cast<const Trace&>(t))) return count;
            std::size_t i = len;
            while (i > 0 && t[i - 1] == u - 1) t[--i] = 0;
            if (i == 0) break;
            ++t[i - 1];
        }
    }
    return count;
}

std::vector<ItemId> subset_items(unsigned universe, std::uint32_t mask) {
    std::vector<ItemId> items;
    for (unsigned i = 0; i < universe; ++i)
        if (mask & (1u << i)) items.push_back(i);
    return items;
}

Trace filter_by_mask(const Trace& trace, std::uint32_t mask) {
    Trace out;
    out.reserve(trace.size());
    for (ItemId x : trace)
        if (mask & (1u << x)) out.push_back(x);
    return out;
}

struct FinalState {
    std::set<ItemId> before;    // contents before the final access
    bool was_full = false;
    AccessOutcome last;
    std::set<ItemId> after;
    bool last_evicted_nonmax = false; // conformance violation flag
    ItemId nonmax_item = 0;           // resident ranked above the victim
};

FinalState replay_final(const PolicyFactory& factory, std::size_t capacity, const Trace& trace,
                        bool check_conformance = false) {
    Policy p = factory(capacity);
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) p.access(trace[i]);
    FinalState st;
    st.before = p.contents();
    st.was_full = p.full();
    st.last = p.access(trace.back());
    st.after = p.contents();
    if (check_conformance && !st.last.evicted.empty()) {
        const ItemId victim = st.last.evicted.front();
        const RankKey vk = p.eviction_rank_key(victim);
        for (ItemId x : st.before) {
            if (x == victim) continue;
            if (rank_less(vk, p.eviction_rank_key(x))) {
                st.last_evicted_nonmax = true;
                st.nonmax_item = x;
                break;
            }
        }
    }
    return st;
}

ClassVerdict make_verdict(ClassPredicate pred, PolicyKind kind, const SearchSpace& space) {
    ClassVerdict v;
    v.predicate = pred;
    v.kind = kind.name();
    v.space = space;
    return v;
}

std::optional<ClassWitness> lazy_one(const PolicyFactory& factory,
                                     const std::vector<std::size_t>& caps, const Trace& trace) {
    for (std::size_t cap : caps) {
        const FinalState st = replay_final(factory, cap, trace);
        const ItemId z = trace.back();
        std::string bad;
        if (st.last.evicted.size() > 1)
            bad = "evicted " + std::to_string(st.last.evicted.size()) + " items on one access";
        else if (st.last.hit && !st.last.evicted.empty())
            bad = "evicted on a hit";
        else if (!st.last.evicted.empty() && !st.was_full)
            bad = "evicted while the cache was not full";
        else {
            // nothing unrequested may enter; nothing may vanish silently
            for (ItemId x : st.after)
                if (!st.before.count(x) && x != z) bad = "fetched an unrequested item";
            for (ItemId x : st.before)
                if (!st.after.count(x) &&
                    std::find(st.last.evicted.begin(), st.last.evicted.end(), x) ==
                        st.last.evicted.end())
                    bad = "item left the cache without an eviction";
        }
        if (!bad.empty()) {
            ClassWitness w;
            w.trace = trace;
            w.z = z;
            w.cap_b = cap;
            w.violating = st.last.evicted;
            w.detail = bad + " at capacity " + std::to_string(cap);
            return w;
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> conservative_one(const PolicyFactory& factory, std::size_t k,
                                             const Trace& trace) {
    Policy p = factory(k);
    std::vector<char> miss(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) miss[i] = !p.access(trace[i]).hit;
    // Only windows ending at the last position; earlier windows were caught
    // on the corresponding shorter trace.
    const std::size_t e = trace.size() - 1;
    std::uint64_t seen_mask = 0;
    std::size_t distinct = 0, misses = 0;
    for (std::size_t s = e + 1; s-- > 0;) {
        const std::uint64_t bit = 1ULL << trace[s];
        if (!(seen_mask & bit)) {
            seen_mask |= bit;
            ++distinct;
        }
        misses += miss[s] ? 1 : 0;
        if (distinct <= k && misses > k) {
            ClassWitness w;
            w.trace = trace;
            w.cap_b = k;
            w.window_begin = s;
            w.window_end = e;
            w.detail = std::to_string(misses) + " misses on a window with " +
                       std::to_string(distinct) + " distinct items at capacity " +
                       std::to_string(k);
            return w;
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> stack_one(const PolicyFactory& factory,
                                      const std::vector<std::size_t>& caps, const Trace& trace) {
    std::vector<std::set<ItemId>> contents;
    contents.reserve(caps.size());
    for (std::size_t cap : caps) {
        Policy p = factory(cap);
        for (ItemId x : trace) p.access(x);
        contents.push_back(p.contents());
    }
    for (std::size_t i = 0; i + 1 < caps.size(); ++i) {
        std::vector<ItemId> extra;
        std::set_difference(contents[i].begin(), contents[i].end(), contents[i + 1].begin(),
                            contents[i + 1].end(), std::back_inserter(extra));
        if (!extra.empty()) {
            ClassWitness w;
            w.trace = trace;
            w.cap_b = caps[i];
            w.cap_a = caps[i + 1];
            w.violating = extra;
            w.detail = "contents at capacity " + std::to_string(caps[i]) +
                       " not contained in capacity " + std::to_string(caps[i + 1]);
            return w;
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> stable_one(const PolicyFactory& factory,
                                       const std::vector<std::size_t>& caps, unsigned universe,
                                       const Trace& trace) {
    const ItemId z = trace.back();
    std::vector<std::set<ItemId>> full_contents(caps.size());
    std::vector<bool> have_full(caps.size(), false);
    const std::uint32_t all = (1u << universe) - 1;
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        if (!(mask & (1u << z))) continue;
        const Trace filtered = filter_by_mask(trace, mask);
        for (std::size_t bi = 0; bi + 1 < caps.size(); ++bi) {
            Policy small = factory(caps[bi]);
            AccessOutcome last;
            for (ItemId x : filtered) last = small.access(x);
            if (last.evicted.empty()) continue;
            for (std::size_t ai = bi + 1; ai < caps.size(); ++ai) {
                if (!have_full[ai]) {
                    Policy big = factory(caps[ai]);
                    for (ItemId x : trace) big.access(x);
                    full_contents[ai] = big.contents();
                    have_full[ai] = true;
                }
                const auto& big = full_contents[ai];
                const bool overlap =
                    std::any_of(last.evicted.begin(), last.evicted.end(),
                                [&](ItemId v) { return big.count(v) != 0; });
                if (!overlap) continue;
                std::vector<ItemId> extra;
                for (ItemId x : small.contents())
                    if (!big.count(x)) extra.push_back(x);
                if (!extra.empty()) {
                    ClassWitness w;
                    w.trace = trace;
                    w.subset = subset_items(universe, mask);
                    w.z = z;
                    w.cap_a = caps[ai];
                    w.cap_b = caps[bi];
                    w.violating = extra;
                    w.detail = "small instance evicted an item held by the large one, yet "
                               "keeps items the large one dropped";
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> conforms_one(const PolicyFactory& factory,
                                         const std::vector<std::size_t>& caps,
                                         const Trace& trace) {
    for (std::size_t cap : caps) {
        const FinalState st = replay_final(factory, cap, trace, true);
        if (st.last_evicted_nonmax) {
            ClassWitness w;
            w.trace = trace;
            w.z = trace.back();
            w.cap_b = cap;
            w.violating = {st.last.evicted.front(), st.nonmax_item};
            w.detail = "evicted item is not rank-maximal at capacity " + std::to_string(cap);
            return w;
        }
    }
    return std::nullopt;
}

std::vector<RankKey> universe_keys(const Policy& p, unsigned universe) {
    std::vector<RankKey> keys;
    keys.reserve(universe);
    for (unsigned i = 0; i < universe; ++i) keys.push_back(p.eviction_rank_key(i));
    return keys;
}

std::optional<ClassWitness> monotone_one(const PolicyFactory& factory, unsigned universe,
                                         const Trace& trace) {
    // Keys depend on history only, so the capacity is immaterial here.
    Policy p = factory(universe);
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) p.access(trace[i]);
    const auto before = universe_keys(p, universe);
    const ItemId z = trace.back();
    p.access(z);
    const auto after = universe_keys(p, universe);
    for (unsigned y = 0; y < universe; ++y) {
        if (y == z) continue;
        for (unsigned x = 0; x < universe; ++x) {
            if (x == y) continue;
            if (rank_less(before[x], before[y]) && !rank_less(after[x], after[y])) {
                ClassWitness w;
                w.trace = trace;
                w.z = z;
                w.violating = {x, y};
                w.detail = "access reordered a pair not involving the accessed item, or "
                           "promoted the accessed item";
                return w;
            }
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> self_similar_one(const PolicyFactory& factory, unsigned universe,
                                             const Trace& trace) {
    Policy full = factory(universe);
    for (ItemId x : trace) full.access(x);
    const auto full_keys = universe_keys(full, universe);
    const std::uint32_t all = (1u << universe) - 1;
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        const Trace filtered = filter_by_mask(trace, mask);
        if (filtered.empty()) continue;
        Policy sub = factory(universe);
        for (ItemId x : filtered) sub.access(x);
        const auto sub_keys = universe_keys(sub, universe);
        std::uint64_t accessed_mask = 0;
        for (ItemId x : filtered) accessed_mask |= 1ULL << x;
        for (unsigned x = 0; x < universe; ++x) {
            if (!(accessed_mask & (1ULL << x))) continue;
            for (unsigned y = 0; y < universe; ++y) {
                if (x == y || !(accessed_mask & (1ULL << y))) continue;
                if (rank_less(sub_keys[x], sub_keys[y]) && !rank_less(full_keys[x], full_keys[y])) {
                    ClassWitness w;
                    w.trace = trace;
                    w.subset = subset_items(universe, mask);
                    w.violating = {x, y};
                    w.detail = "order on the subsequence does not persist in the full sequence";
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ClassWitness> belady_one(const PolicyFactory& factory,
                                       const std::vector<std::size_t>& caps, const Trace& trace) {
    std::vector<std::uint64_t> misses;
    misses.reserve(caps.size());
    for (std::size_t cap : caps) {
        Policy p = factory(cap);
        std::uint64_t m = 0;
        for (ItemId x : trace)
            if (!p.access(x).hit) ++m;
        misses.push_back(m);
    }
    for (std::size_t bi = 0; bi < caps.size(); ++bi)
        for (std::size_t ai = bi + 1; ai < caps.size(); ++ai)
            if (misses[ai] > misses[bi]) {
                ClassWitness w;
                w.trace = trace;
                w.cap_a = caps[ai];
                w.cap_b = caps[bi];
                w.detail = std::to_string(misses[ai]) + " misses at capacity " +
                           std::to_string(caps[ai]) + " vs " + std::to_string(misses[bi]) +
                           " at capacity " + std::to_string(caps[bi]);
                return w;
            }
    return std::nullopt;
}

template <typename OneFn>
ClassVerdict run_search(ClassPredicate pred, PolicyKind kind, const SearchSpace& space,
                        OneFn&& one) {
    ClassVerdict v = make_verdict(pred, kind, space);
    v.traces_checked = enumerate_traces(space, [&](const Trace& t) {
        if (auto w = one(t)) {
            v.pass = false;
            v.witness = std::move(*w);
            return true;
        }
        return false;
    });
    return v;
}

std::vector<std::size_t> sorted_caps(const SearchSpace& space) {
    std::vector<std::size_t> caps = space.capacities;
    std::sort(caps.begin(), caps.end());
    caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
    if (caps.empty() || caps.front() == 0)
        throw std::invalid_argument("capacities must be positive");
    return caps;
}

void require_order_family(PolicyKind kind) {
    if (!kind.has_order_family())
        throw std::invalid_argument("policy kind " + kind.name() + " has no order family");
}

} // namespace

std::uint64_t SearchSpace::trace_count() const { return space_size(universe, max_len); }

std::string to_string(ClassPredicate p) {
    switch (p) {
        case ClassPredicate::Lazy: return "LAZY";
        case ClassPredicate::Conservative: return "CONSERVATIVE";
        case ClassPredicate::Stack: return "STACK";
        case ClassPredicate::Stable: return "STABLE";
        case ClassPredicate::Conforms: return "CONFORMS";
        case ClassPredicate::MonotoneFamily: return "MONOTONE-FAMILY";
        case ClassPredicate::SelfSimilarFamily: return "SELF-SIMILAR-FAMILY";
        case ClassPredicate::BeladyAnomalyFree: return "BELADY-ANOMALY-FREE";
    }
    return "?";
}

PolicyFactory factory_for(PolicyKind kind) {
    return [kind](std::size_t capacity) { return Policy(kind, capacity); };
}

ClassVerdict check_lazy(PolicyKind kind, const SearchSpace& space) {
    const auto caps = sorted_caps(space);
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::Lazy, kind, space,
                      [&](const Trace& t) { return lazy_one(f, caps, t); });
}

ClassVerdict check_conservative(PolicyKind kind, const SearchSpace& space, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    const auto f = factory_for(kind);
    ClassVerdict v = run_search(ClassPredicate::Conservative, kind, space,
                                [&](const Trace& t) { return conservative_one(f, k, t); });
    return v;
}

ClassVerdict check_stack(PolicyKind kind, const SearchSpace& space) {
    const auto caps = sorted_caps(space);
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::Stack, kind, space,
                      [&](const Trace& t) { return stack_one(f, caps, t); });
}

ClassVerdict check_stable(PolicyKind kind, const SearchSpace& space) {
    const auto caps = sorted_caps(space);
    if (space.universe > 31) throw std::invalid_argument("stable check needs universe <= 31");
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::Stable, kind, space, [&](const Trace& t) {
        return stable_one(f, caps, space.universe, t);
    });
}

ClassVerdict check_conforms(PolicyKind kind, const SearchSpace& space) {
    return check_conforms(kind, space, factory_for(kind));
}

ClassVerdict check_conforms(PolicyKind kind, const SearchSpace& space,
                            const PolicyFactory& factory) {
    require_order_family(kind);
    const auto caps = sorted_caps(space);
    return run_search(ClassPredicate::Conforms, kind, space,
                      [&](const Trace& t) { return conforms_one(factory, caps, t); });
}

ClassVerdict check_family_monotone(PolicyKind kind, const SearchSpace& space) {
    require_order_family(kind);
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::MonotoneFamily, kind, space, [&](const Trace& t) {
        return monotone_one(f, space.universe, t);
    });
}

ClassVerdict check_family_self_similar(PolicyKind kind, const SearchSpace& space) {
    require_order_family(kind);
    if (space.universe > 31) throw std::invalid_argument("self-similar check needs universe <= 31");
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::SelfSimilarFamily, kind, space, [&](const Trace& t) {
        return self_similar_one(f, space.universe, t);
    });
}

ClassVerdict find_belady_anomaly(PolicyKind kind, const SearchSpace& space) {
    const auto caps = sorted_caps(space);
    const auto f = factory_for(kind);
    return run_search(ClassPredicate::BeladyAnomalyFree, kind, space,
                      [&](const Trace& t) { return belady_one(f, caps, t); });
}

bool verify_witness(const ClassVerdict& verdict) {
    if (verdict.pass) return true;
    if (!verdict.witness) return false;
    const PolicyKind kind = PolicyKind::parse(verdict.kind);
    const auto f = factory_for(kind);
    const auto caps = sorted_caps(verdict.space);
    const Trace& t = verdict.witness->trace;
    switch (verdict.predicate) {
        case ClassPredicate::Lazy: return lazy_one(f, caps, t).has_value();
        case ClassPredicate::Conservative:
            return conservative_one(f, verdict.witness->cap_b, t).has_value();
        case ClassPredicate::Stack: return stack_one(f, caps, t).has_value();
        case ClassPredicate::Stable: return stable_one(f, caps, verdict.space.universe, t).has_value();
        case ClassPredicate::Conforms: return conforms_one(f, caps, t).has_value();
        case ClassPredicate::MonotoneFamily:
            return monotone_one(f, verdict.space.universe, t).has_value();
        case ClassPredicate::SelfSimilarFamily:
            return self_similar_one(f, verdict.space.universe, t).has_value();
        case ClassPredicate::BeladyAnomalyFree: return belady_one(f, caps, t).has_value();
    }
    return false;
}

} // namespace pagelab
