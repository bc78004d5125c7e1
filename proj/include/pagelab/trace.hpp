#pragma once

#include <cstdint>
#include <vector>

namespace pagelab {

// Items are opaque 64-bit identifiers; the total order is the numeric one.
using ItemId = std::uint64_t;

// A finite request sequence.
using Trace = std::vector<ItemId>;

// Subsequence restriction: keep exactly the requests for items in `keep`.
// `keep` must be sorted ascending.
Trace restrict_to(const Trace& trace, const std::vector<ItemId>& keep);

// Number of distinct items in the trace.
std::size_t distinct_items(const Trace& trace);

} // namespace pagelab
