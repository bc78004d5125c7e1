#include "pagelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pagelab/rng.hpp"
#include "pagelab/trace_io.hpp"

namespace pagelab {

double auto_delta(std::size_t k, std::size_t alpha, double c) {
    if (k < 2) throw std::invalid_argument("k must be >= 2 for AUTO delta");
    const double d = std::sqrt(24.0 * c * std::log(static_cast<double>(k)) /
                               static_cast<double>(alpha));
    return std::min(0.5, d);
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body) {
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        const std::string part = body.substr(pos, comma - pos);
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value in trace spec, got: " + part);
        kv[part.substr(0, eq)] = part.substr(eq + 1);
        pos = comma + 1;
    }
    return kv;
}

std::uint64_t want_u64(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("trace spec is missing " + key);
    return std::stoull(it->second);
}

double want_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("trace spec is missing " + key);
    return std::stod(it->second);
}

std::optional<std::uint64_t> maybe_u64(const std::map<std::string, std::string>& kv,
                                       const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return std::stoull(it->second);
}

std::optional<double> maybe_double(const std::map<std::string, std::string>& kv,
                                   const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return std::stod(it->second);
}

} // namespace

Trace materialize_trace(const std::string& spec, const RowContext& row) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (name == "file") {
        const std::size_t comma = body.find(",format=");
        const std::string path = comma == std::string::npos ? body : body.substr(0, comma);
        const TraceFormat fmt = comma == std::string::npos
                                    ? TraceFormat::Text
                                    : parse_trace_format(body.substr(comma + 8));
        return load_trace(path, fmt);
    }

    const auto kv = parse_kv(body);
    if (name == "zipf") {
        return zipf_trace(want_u64(kv, "universe"), want_double(kv, "exponent"),
                          want_u64(kv, "length"), row.seed);
    }
    if (name == "adversary") {
        TradeoffAdversaryParams p;
        p.k = row.k;
        p.alpha = row.alpha;
        p.delta = maybe_double(kv, "delta").value_or(row.delta);
        p.c = maybe_double(kv, "c").value_or(1.0);
        p.s_override = maybe_u64(kv, "s");
        p.t_override = maybe_u64(kv, "t");
        return tradeoff_adversary(p, 0);
    }
    if (name == "cycler") {
        const std::uint64_t kp = maybe_u64(kv, "kprime").value_or(row.k_prime);
        return fixed_set_cycler(kp, want_u64(kv, "reps"), 0);
    }
    if (name == "adv-zipf-mix") {
        TradeoffAdversaryParams p;
        p.k = row.k;
        p.alpha = row.alpha;
        p.delta = maybe_double(kv, "delta").value_or(row.delta);
        p.c = maybe_double(kv, "c").value_or(1.0);
        p.s_override = maybe_u64(kv, "s");
        p.t_override = maybe_u64(kv, "t");
        const double exponent = want_double(kv, "exponent");
        const TradeoffAdversaryResolved r = resolve_tradeoff_adversary(p);
        // One adversary phase (t scans of S_i), then an equal-length Zipf
        // segment over the full adversary item range, repeated per phase.
        const std::uint64_t phase_len = r.t * r.k_prime;
        const std::uint64_t universe = r.s * r.k_prime;
        Trace mixed;
        mixed.reserve(2 * r.length);
        for (std::uint64_t i = 0; i < r.s; ++i) {
            const ItemId base = i * r.k_prime;
            for (std::uint64_t rep = 0; rep < r.t; ++rep)
                for (std::uint64_t j = 0; j < r.k_prime; ++j) mixed.push_back(base + j);
            const std::uint64_t filler_seed = rng::at(row.seed ^ 0xf111e7ULL, i);
            Trace filler = zipf_trace(universe, exponent, phase_len, filler_seed);
            mixed.insert(mixed.end(), filler.begin(), filler.end());
        }
        return mixed;
    }
    throw std::invalid_argument("unknown trace source: " + spec);
}

std::vector<SweepRow> run_threshold_sweep(const ExperimentConfig& config) {
    if (config.alpha_grid.empty()) throw std::invalid_argument("alpha grid is empty");
    for (std::size_t a : config.alpha_grid)
        if (a == 0 || config.k % a != 0)
            throw std::invalid_argument("alpha " + std::to_string(a) + " does not divide k");

    std::vector<SweepRow> rows;
    std::vector<std::size_t> grid = config.alpha_grid;
    std::sort(grid.begin(), grid.end());

    // Traces are shared across rows with equal (k', delta, seed) — except
    // that adversary specs without explicit s and t derive them from the
    // row's alpha, which then has to be part of the key.
    bool alpha_sensitive = false;
    {
        const std::size_t colon = config.trace_source.find(':');
        const std::string name = config.trace_source.substr(0, colon);
        if (name == "adversary" || name == "adv-zipf-mix") {
            const auto kv = parse_kv(colon == std::string::npos
                                         ? ""
                                         : config.trace_source.substr(colon + 1));
            alpha_sensitive = !kv.count("s") || !kv.count("t");
        }
    }
    std::map<std::tuple<std::size_t, std::uint64_t, double, std::uint64_t>, Trace> cache;

    for (std::size_t alpha : grid) {
        const double delta = config.delta ? *config.delta : auto_delta(config.k, alpha, config.c);
        if (delta <= 0.0 || delta >= 1.0)
            throw std::invalid_argument("delta " + std::to_string(delta) + " out of range");
        const std::uint64_t k_prime = static_cast<std::uint64_t>(
            std::ceil((1.0 - delta) * static_cast<double>(config.k)));
        for (std::uint64_t seed : config.seeds) {
            const auto key =
                std::make_tuple(alpha_sensitive ? alpha : 0, k_prime, delta, seed);
            auto it = cache.find(key);
            if (it == cache.end()) {
                RowContext row{config.k, alpha, delta, k_prime, seed};
                it = cache.emplace(key, materialize_trace(config.trace_source, row)).first;
            }
            SetAssocCache sa(config.k, alpha, config.kind, seed, config.rehash);
            const PairRunReport rep = run_pair(it->second, sa, config.kind, k_prime);
            SweepRow r;
            r.alpha = alpha;
            r.delta = delta;
            r.k_prime = k_prime;
            r.misses_sa = rep.misses_test;
            r.misses_fa = rep.misses_ref;
            r.bad_evictions = rep.bad_evictions;
            r.flush_evictions = rep.flush_evictions;
            r.ratio = rep.misses_ref == 0
                          ? 0.0
                          : static_cast<double>(rep.misses_test) /
                                static_cast<double>(rep.misses_ref);
            r.seed = seed;
            r.ledger_violations = rep.ledger_violations;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<RehashRow> run_rehash_longrun(const ExperimentConfig& config, bool include_control) {
    if (config.rehash.mode == RehashMode::None)
        throw std::invalid_argument("rehash long-run needs a non-NONE test mode");
    if (config.alpha_grid.size() != 1)
        throw std::invalid_argument("rehash long-run uses a single alpha");
    const std::size_t alpha = config.alpha_grid.front();
    if (alpha == 0 || config.k % alpha != 0)
        throw std::invalid_argument("alpha must divide k");
    const double delta = config.delta ? *config.delta : auto_delta(config.k, alpha, config.c);
    const std::uint64_t k_prime = static_cast<std::uint64_t>(
        std::ceil((1.0 - delta) * static_cast<double>(config.k)));

    RowContext row{config.k, alpha, delta, k_prime, config.seeds.empty() ? 0 : config.seeds[0]};
    const Trace trace = materialize_trace(config.trace_source, row);
    if (trace.empty()) throw std::invalid_argument("empty trace");
    // Checkpoints are counted in whole cycles of the cycled set; non-cycler
    // sources get a single final checkpoint.
    std::uint64_t block = trace.size();
    if (config.trace_source.rfind("cycler:", 0) == 0) {
        const auto kv = parse_kv(config.trace_source.substr(7));
        block = maybe_u64(kv, "kprime").value_or(k_prime);
        if (block == 0 || trace.size() % block != 0)
            throw std::invalid_argument("cycler trace length not a multiple of the set size");
    }
    const std::uint64_t reps = trace.size() / block;

    std::vector<RehashRow> rows;
    std::vector<RehashMode> modes;
    if (include_control) modes.push_back(RehashMode::None);
    modes.push_back(config.rehash.mode);

    for (RehashMode mode : modes) {
        RehashConfig rc = config.rehash;
        rc.mode = mode;
        for (std::uint64_t seed : config.seeds) {
            SetAssocCache sa(config.k, alpha, config.kind, seed, rc);
            Policy ref(config.kind, k_prime);
            std::uint64_t misses_sa = 0, misses_fa = 0, bad = 0, flush = 0, violations = 0;
            std::uint64_t next_checkpoint = 1;
            for (std::uint64_t i = 0; i < trace.size(); ++i) {
                const ItemId x = trace[i];
                if (!ref.access(x).hit) ++misses_fa;
                const SaAccessOutcome out = sa.access(x);
                if (!out.hit) ++misses_sa;
                for (ItemId v : out.evicted)
                    if (ref.contains(v)) ++bad;
                flush += out.rehash_evicted.size();
                if (misses_sa > misses_fa + bad + flush) ++violations;
                const std::uint64_t done = (i + 1) / block;
                if ((i + 1) % block == 0 && done == next_checkpoint) {
                    RehashRow r;
                    r.mode = to_string(mode);
                    r.seed = seed;
                    r.checkpoint_reps = done;
                    r.misses_sa = misses_sa;
                    r.misses_fa = misses_fa;
                    r.ratio = misses_fa == 0 ? 0.0
                                             : static_cast<double>(misses_sa) /
                                                   static_cast<double>(misses_fa);
                    r.bad_evictions = bad;
                    r.flush_evictions = flush;
                    r.ledger_violations = violations;
                    rows.push_back(r);
                    next_checkpoint *= 2;
                }
            }
            // Always sample the final state, even off the power-of-two grid.
            if (rows.empty() || rows.back().checkpoint_reps != reps || rows.back().seed != seed ||
                rows.back().mode != to_string(mode)) {
                RehashRow r;
                r.mode = to_string(mode);
                r.seed = seed;
                r.checkpoint_reps = reps;
                r.misses_sa = misses_sa;
                r.misses_fa = misses_fa;
                r.ratio = misses_fa == 0 ? 0.0
                                         : static_cast<double>(misses_sa) /
                                               static_cast<double>(misses_fa);
                r.bad_evictions = bad;
                r.flush_evictions = flush;
                r.ledger_violations = violations;
                rows.push_back(r);
            }
        }
    }
    return rows;
}

} // namespace pagelab
