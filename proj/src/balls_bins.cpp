#include "pagelab/balls_bins.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

#include "pagelab/rng.hpp"

namespace pagelab {

using boost::multiprecision::cpp_int;

double f_bound(std::uint64_t n, std::uint64_t m, double epsilon) {
    const double h = static_cast<double>(m) / static_cast<double>(n);
    return static_cast<double>(n) * std::exp(-2.0 * epsilon * epsilon * h);
}

ExactProbability exact_overflow_probability(std::uint64_t m, std::uint64_t n,
                                            std::uint64_t alpha, std::uint64_t budget) {
    if (n == 0) throw std::invalid_argument("need at least one bin");
    ExactProbability out;
    if (m <= alpha) {
        out.numerator = "0";
        out.denominator = "1";
        out.value = 0.0;
        return out;
    }
    const std::uint64_t cost = m * n * std::min(alpha + 1, m);
    if (cost > budget)
        throw std::invalid_argument("exact overflow DP budget exceeded");

    // Count placement sequences where every bin load is <= alpha.
    // ok[b][r]: weighted count of ways to fill b bins with r balls, parts <= alpha.
    std::vector<cpp_int> prev(m + 1), cur(m + 1);
    prev[0] = 1;
    for (std::uint64_t b = 1; b <= n; ++b) {
        for (std::uint64_t r = 0; r <= m; ++r) {
            cpp_int acc = 0;
            const std::uint64_t top = std::min<std::uint64_t>(alpha, r);
            cpp_int choose = 1; // C(r, l), updated incrementally
            for (std::uint64_t l = 0; l <= top; ++l) {
                if (l > 0) choose = choose * (r - l + 1) / l;
                if (prev[r - l] != 0) acc += choose * prev[r - l];
            }
            cur[r] = acc;
        }
        std::swap(prev, cur);
    }
    const cpp_int ok = prev[m];
    cpp_int total = 1;
    for (std::uint64_t i = 0; i < m; ++i) total *= n;
    cpp_int num = total - ok;
    // reduce
    cpp_int g = boost::multiprecision::gcd(num, total);
    if (g != 0) {
        num /= g;
        total /= g;
    }
    out.numerator = num.str();
    out.denominator = total.str();
    out.value = boost::multiprecision::cpp_rational(num, total).convert_to<double>();
    return out;
}

namespace {

// Loads for one trial, written into `loads` (resized/zeroed by the caller).
void throw_balls(std::uint64_t seed, std::uint64_t trial, std::uint64_t m, std::uint64_t n,
                 std::vector<std::uint32_t>& loads) {
    std::fill(loads.begin(), loads.end(), 0u);
    const std::uint64_t stream = rng::at(seed, trial);
    for (std::uint64_t i = 0; i < m; ++i) ++loads[rng::at(stream, i) % n];
}

} // namespace

McEstimate mc_overflow_probability(const BallsBinsParams& params, std::uint64_t alpha) {
    if (params.bins == 0) throw std::invalid_argument("need at least one bin");
    if (params.trials == 0) throw std::invalid_argument("need at least one trial");
    McEstimate est;
    est.trials = params.trials;
    std::uint64_t hits = 0;
    std::vector<std::uint32_t> loads(params.bins);
    for (std::uint64_t t = 0; t < params.trials; ++t) {
        throw_balls(params.seed, t, params.balls, params.bins, loads);
        for (std::uint32_t l : loads)
            if (l > alpha) {
                ++hits;
                break;
            }
    }
    const double p = static_cast<double>(hits) / static_cast<double>(params.trials);
    est.estimate = p;
    est.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(params.trials));
    return est;
}

SaturationStats mc_saturated_bins(const BallsBinsParams& params, double epsilon) {
    if (params.bins == 0) throw std::invalid_argument("need at least one bin");
    if (params.trials == 0) throw std::invalid_argument("need at least one trial");
    SaturationStats st;
    st.epsilon = epsilon;
    st.h = static_cast<double>(params.balls) / static_cast<double>(params.bins);
    st.f_value = f_bound(params.bins, params.balls, epsilon);
    st.epsilon_in_bound_range =
        params.bins >= 2 && epsilon >= 0.0 &&
        epsilon <= static_cast<double>(params.bins) - 2.0;
    // a bin is eps*h-saturated when load >= h + eps*h
    const double threshold = (1.0 + epsilon) * st.h;
    st.saturated_counts.reserve(params.trials);
    std::uint64_t above = 0;
    std::vector<std::uint32_t> loads(params.bins);
    const double cut = st.f_value / 8.0;
    for (std::uint64_t t = 0; t < params.trials; ++t) {
        throw_balls(params.seed, t, params.balls, params.bins, loads);
        std::uint32_t count = 0;
        for (std::uint32_t l : loads)
            if (static_cast<double>(l) >= threshold - 1e-9) ++count;
        st.saturated_counts.push_back(count);
        if (static_cast<double>(count) > cut) ++above;
    }
    const double p = static_cast<double>(above) / static_cast<double>(params.trials);
    st.fraction_above_f_over_8 = p;
    st.fraction_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(params.trials));
    return st;
}

} // namespace pagelab
