#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pagelab/adversary.hpp"
#include "pagelab/policy.hpp"
#include "pagelab/set_assoc.hpp"
#include "pagelab/trace.hpp"

namespace pagelab {

enum class ExperimentKind {
    ThresholdSweep,
    RehashLongrun,
    ClassAudit,
    BallsBinsAudit,
    PairRun,
};

// The capacity gap used when delta is AUTO: min(1/2, sqrt(24 c ln(k) / alpha)).
// The sqrt expression is the one that yields 1-competitiveness w.h.p. in the
// super-logarithmic regime; it is clamped at 1/2, the largest gap the
// competitive analysis permits (and past which the reference cache would
// shrink unreasonably at desk scale).
double auto_delta(std::size_t k, std::size_t alpha, double c);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ThresholdSweep;
    std::size_t k = 4096;
    std::vector<std::size_t> alpha_grid;
    std::optional<double> delta; // nullopt = AUTO, recomputed per alpha
    double c = 1.0;
    PolicyKind kind = PolicyKind::lru();
    RehashConfig rehash;
    // Generator spec or file reference; see materialize_trace().
    std::string trace_source;
    std::vector<std::uint64_t> seeds{1};
    std::string output;
    std::string format = "csv";
};

// Everything a generator spec may depend on for one sweep row.
struct RowContext {
    std::size_t k = 0;
    std::size_t alpha = 0;
    double delta = 0.5;
    std::uint64_t k_prime = 0;
    std::uint64_t seed = 0;
};

// Trace sources (parsed from `trace_source`):
//   file:PATH[,format=text|binary]
//   zipf:universe=U,exponent=E,length=N
//   adversary:s=S,t=T[,delta=D][,c=C]          (k' defaults to the row's)
//   cycler:reps=R[,kprime=KP]
//   adv-zipf-mix:s=S,t=T,exponent=E            (adversary phases alternating
//                                               with equal-length Zipf filler
//                                               over the adversary's items)
Trace materialize_trace(const std::string& spec, const RowContext& row);

struct SweepRow {
    std::size_t alpha = 0;
    double delta = 0.0;
    std::uint64_t k_prime = 0;
    std::uint64_t misses_sa = 0;
    std::uint64_t misses_fa = 0;
    std::uint64_t bad_evictions = 0;
    std::uint64_t flush_evictions = 0;
    double ratio = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t ledger_violations = 0; // not serialized; asserted zero in tests
};

std::vector<SweepRow> run_threshold_sweep(const ExperimentConfig& config);

struct RehashRow {
    std::string mode;
    std::uint64_t seed = 0;
    std::uint64_t checkpoint_reps = 0;
    std::uint64_t misses_sa = 0;
    std::uint64_t misses_fa = 0;
    double ratio = 0.0;
    std::uint64_t bad_evictions = 0;
    std::uint64_t flush_evictions = 0;
    std::uint64_t ledger_violations = 0; // not serialized
};

// Replays the configured cycler trace through the rehashing cache and, when
// `include_control` is set, a NONE-mode control, against the same fully
// associative reference. Cumulative ratios are sampled at repetition
// checkpoints 1, 2, 4, ... (powers of two).
std::vector<RehashRow> run_rehash_longrun(const ExperimentConfig& config,
                                          bool include_control = true);

} // namespace pagelab
