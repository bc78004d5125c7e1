#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pagelab {

struct BallsBinsParams {
    std::uint64_t balls = 0;   // m
    std::uint64_t bins = 1;    // n
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
};

// f(n, m, eps) = n * exp(-2 eps^2 h) with h = m/n: the expected-count scale
// for eps*h-saturated bins in the reverse-Chernoff bound.
double f_bound(std::uint64_t n, std::uint64_t m, double epsilon);

// Exact probability that the maximum bin load exceeds alpha when m balls are
// placed uniformly and independently into n bins. Computed by dynamic
// programming over load compositions in exact integer arithmetic; the result
// is returned as a decimal string pair (numerator, denominator) plus a
// double approximation.
struct ExactProbability {
    std::string numerator;
    std::string denominator;
    double value = 0.0;
};

// Throws std::invalid_argument when the DP table would be unreasonably large
// (m * n * alpha beyond the configured budget).
ExactProbability exact_overflow_probability(std::uint64_t m, std::uint64_t n,
                                            std::uint64_t alpha,
                                            std::uint64_t budget = 200'000'000);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
};

// Monte Carlo frequency of the overflow event; deterministic per seed, and
// trial i draws from the counter stream (seed, i) so trials can be
// partitioned without changing the result.
McEstimate mc_overflow_probability(const BallsBinsParams& params, std::uint64_t alpha);

struct SaturationStats {
    double epsilon = 0.0;
    double h = 0.0;       // average load m/n
    double f_value = 0.0; // n exp(-2 eps^2 h)
    bool epsilon_in_bound_range = true;
    std::vector<std::uint32_t> saturated_counts; // per trial
    // Fraction of trials whose saturated-bin count exceeds f_value / 8, with
    // its binomial standard error.
    double fraction_above_f_over_8 = 0.0;
    double fraction_stderr = 0.0;
};

// Counts, per trial, the bins with load >= h + eps*h.
SaturationStats mc_saturated_bins(const BallsBinsParams& params, double epsilon);

} // namespace pagelab
