#pragma once

#include <cstdint>

#include "pagelab/trace.hpp"

namespace pagelab {

// Miss count of the offline furthest-in-future policy (Belady's MIN) at
// capacity k. Ties among items never used again: evict the largest id.
std::uint64_t compute_opt_cost(const Trace& trace, std::size_t k);

} // namespace pagelab
