#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pagelab/policy.hpp"
#include "pagelab/trace.hpp"

namespace pagelab {

// Bounded exhaustive search space: every trace of length 1..max_len over the
// items {0, ..., universe-1}, quantified over the listed capacities and (where
// a predicate calls for it) over subsets of the universe.
struct SearchSpace {
    unsigned universe = 4;
    unsigned max_len = 8;
    std::vector<std::size_t> capacities{2, 3, 4};
    // Upper bound on the number of traces enumerated per predicate
    // (sum over lengths of universe^len). The search refuses larger spaces.
    std::uint64_t budget = 10'000'000;

    std::uint64_t trace_count() const;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ClassPredicate {
    Lazy,
    Conservative,
    Stack,
    Stable,
    Conforms,
    MonotoneFamily,
    SelfSimilarFamily,
    BeladyAnomalyFree,
};

std::string to_string(ClassPredicate p);

// Minimal counterexample. Fields beyond `trace` are filled per predicate:
// stable uses (subset, z, cap_a, cap_b); stack and Belady use (cap_a, cap_b);
// conservative uses (window_begin, window_end); the family checks record the
// violating item pair in `violating`.
struct ClassWitness {
    Trace trace;
    std::vector<ItemId> subset;
    ItemId z = 0;
    std::size_t cap_a = 0;
    std::size_t cap_b = 0;
    std::size_t window_begin = 0;
    std::size_t window_end = 0;
    std::vector<ItemId> violating;
    std::string detail;
};

struct ClassVerdict {
    ClassPredicate predicate;
    std::string kind;
    bool pass = true;
    std::optional<ClassWitness> witness;
    std::uint64_t traces_checked = 0;
    SearchSpace space;
};

// Factory indirection so tests can audit deliberately corrupted machines.
using PolicyFactory = std::function<Policy(std::size_t capacity)>;
PolicyFactory factory_for(PolicyKind kind);

// Laziness: at most one eviction per access, only on a miss with a full
// cache, and nothing enters the cache unrequested.
ClassVerdict check_lazy(PolicyKind kind, const SearchSpace& space);

// Conservativeness at cache size k: any window of any trace containing at
// most k distinct items incurs at most k misses.
ClassVerdict check_conservative(PolicyKind kind, const SearchSpace& space, std::size_t k);

// Stack inclusion between adjacent capacities, on every prefix.
ClassVerdict check_stack(PolicyKind kind, const SearchSpace& space);

// Stability: for every trace tz, subset X containing z, and capacities a > b,
// if the small instance on the subsequence evicts an item the large instance
// still holds, the small cache is contained in the large one.
ClassVerdict check_stable(PolicyKind kind, const SearchSpace& space);

// Conformance: every eviction removes the rank-largest resident.
ClassVerdict check_conforms(PolicyKind kind, const SearchSpace& space);
ClassVerdict check_conforms(PolicyKind kind, const SearchSpace& space, const PolicyFactory& factory);

// Monotone order family: an access never changes the relative order of two
// other items, and never demotes the accessed item to a larger rank.
ClassVerdict check_family_monotone(PolicyKind kind, const SearchSpace& space);

// Self-similar order family: order relations on a subsequence persist in the
// full sequence.
ClassVerdict check_family_self_similar(PolicyKind kind, const SearchSpace& space);

// Passes when no trace in the space makes a larger cache miss more often
// than a smaller one.
ClassVerdict find_belady_anomaly(PolicyKind kind, const SearchSpace& space);

// Independently replays a failing verdict's witness and confirms it still
// violates the predicate. Passing verdicts return true.
bool verify_witness(const ClassVerdict& verdict);

} // namespace pagelab
