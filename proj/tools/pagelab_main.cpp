// pagelab: trace-driven paging simulation laboratory.
//
// Subcommands: sweep | rehash | audit-classes | audit-ballsbins | pair-run |
// gen-trace. Every run is reproducible from its command line (or from a
// config file via --config); reports are byte-identical across repeats.

#include <cmath>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pagelab/adversary.hpp"
#include "pagelab/balls_bins.hpp"
#include "pagelab/class_checks.hpp"
#include "pagelab/experiments.hpp"
#include "pagelab/opt_cost.hpp"
#include "pagelab/report.hpp"
#include "pagelab/set_assoc.hpp"
#include "pagelab/trace_io.hpp"

using namespace pagelab;

namespace {

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_file(out_path, text);
    }
}

template <typename Row>
void emit_rows(const std::string& out_path, const std::string& format, const Json& config,
               const std::vector<Row>& rows) {
    if (parse_report_format(format) == ReportFormat::Csv) {
        emit(out_path, render_csv(rows));
    } else {
        emit(out_path, render_json(make_meta(config), rows).dump(2) + "\n");
    }
}

RehashConfig rehash_from(const std::string& mode, std::uint64_t threshold, double exponent) {
    RehashConfig rc;
    rc.mode = parse_rehash_mode(mode);
    rc.threshold = threshold;
    rc.exponent = exponent;
    return rc;
}

std::optional<double> parse_delta(const std::string& text) {
    if (text == "auto" || text == "AUTO") return std::nullopt;
    return std::stod(text);
}

std::vector<BallsBinsAuditRow> default_ballsbins_audit(std::uint64_t trials,
                                                       std::uint64_t seed) {
    std::vector<BallsBinsAuditRow> rows;

    // Monte Carlo vs exact DP on every case small enough to enumerate.
    struct Case {
        std::uint64_t m, n, alpha;
    };
    const Case cases[] = {{2, 2, 1}, {3, 3, 2}, {4, 2, 1}, {4, 2, 2},  {4, 2, 3},  {5, 3, 2},
                          {6, 3, 1}, {6, 4, 3}, {8, 4, 2}, {10, 4, 3}, {12, 2, 6}, {10, 3, 4}};
    for (const Case& c : cases) {
        const ExactProbability exact = exact_overflow_probability(c.m, c.n, c.alpha);
        const McEstimate est = mc_overflow_probability({c.m, c.n, trials, seed}, c.alpha);
        BallsBinsAuditRow r;
        r.check = "mc-vs-exact";
        r.n = c.n;
        r.m = c.m;
        r.alpha = c.alpha;
        r.trials = trials;
        r.seed = seed;
        r.estimate = est.estimate;
        r.stderr_ = std::sqrt(exact.value * (1.0 - exact.value) / static_cast<double>(trials));
        r.bound = exact.value;
        r.holds = std::abs(est.estimate - exact.value) <= 4.0 * r.stderr_ + 1e-12;
        rows.push_back(r);
    }

    // Bucket-overflow probability bound, one-sided.
    const std::uint64_t k = 4096;
    for (std::uint64_t alpha : {64ULL, 128ULL, 256ULL, 512ULL}) {
        const std::uint64_t n = k / alpha;
        const double delta =
            std::sqrt(12.0 * std::log(static_cast<double>(n)) / static_cast<double>(alpha));
        const std::uint64_t m = static_cast<std::uint64_t>(
            std::ceil((1.0 - delta) * static_cast<double>(k)));
        const McEstimate est = mc_overflow_probability({m, n, trials, seed}, alpha);
        BallsBinsAuditRow r;
        r.check = "overflow-bound";
        r.n = n;
        r.m = m;
        r.alpha = alpha;
        r.epsilon = delta;
        r.trials = trials;
        r.seed = seed;
        r.estimate = est.estimate;
        r.stderr_ = est.stderr_;
        r.bound = std::exp(-delta * delta * static_cast<double>(alpha) / 12.0);
        r.holds = est.estimate - 4.0 * est.stderr_ <= r.bound;
        r.hypothesis_met = delta <= 0.5;
        rows.push_back(r);
    }

    // Saturated-bins count lower bound, one-sided.
    for (std::uint64_t n : {64ULL, 256ULL}) {
        for (std::uint64_t h : {4ULL, 16ULL}) {
            for (double eps : {0.25, 0.5}) {
                const std::uint64_t m = n * h;
                const SaturationStats st = mc_saturated_bins({m, n, trials, seed}, eps);
                BallsBinsAuditRow r;
                r.check = "saturation-bound";
                r.n = n;
                r.m = m;
                r.epsilon = eps;
                r.trials = trials;
                r.seed = seed;
                r.estimate = st.fraction_above_f_over_8;
                r.stderr_ = st.fraction_stderr;
                r.bound = 1.0 - std::exp(-st.f_value / 32.0);
                r.holds = st.fraction_above_f_over_8 >= r.bound - 4.0 * st.fraction_stderr;
                r.hypothesis_met = st.epsilon_in_bound_range;
                rows.push_back(r);
            }
        }
    }
    return rows;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pagelab: set-associative paging simulation laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a key=value file");

    std::string out = "-";
    std::string format = "csv";
    app.add_option("--out", out, "Output path ('-' for stdout)")->capture_default_str();
    app.add_option("--format", format, "csv or json")->capture_default_str();

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Associativity threshold sweep");
    ExperimentConfig sc;
    sc.experiment = ExperimentKind::ThresholdSweep;
    std::string sweep_delta = "auto";
    std::string sweep_kind = "LRU";
    std::string sweep_rehash = "NONE";
    std::uint64_t sweep_threshold = 0;
    double sweep_exponent = 2.0;
    sweep->add_option("--k", sc.k, "Total cache slots")->capture_default_str();
    sweep->add_option("--alphas", sc.alpha_grid, "Bucket sizes (each must divide k)")->required();
    sweep->add_option("--delta", sweep_delta, "Capacity gap, or 'auto'")->capture_default_str();
    sweep->add_option("--c", sc.c, "Target ratio used by AUTO delta")->capture_default_str();
    sweep->add_option("--kind", sweep_kind, "Eviction policy")->capture_default_str();
    sweep->add_option("--trace", sc.trace_source, "Trace source spec")->required();
    sweep->add_option("--seeds", sc.seeds, "Hash seeds")->capture_default_str();
    sweep->add_option("--rehash-mode", sweep_rehash, "NONE, FULL-FLUSH or INCREMENTAL")
        ->capture_default_str();
    sweep->add_option("--rehash-threshold", sweep_threshold, "Misses per rehash (0 = k^d)")
        ->capture_default_str();
    sweep->add_option("--rehash-exponent", sweep_exponent, "d in the k^d default")
        ->capture_default_str();

    // ---- rehash ----
    auto* rh = app.add_subcommand("rehash", "Long-run rehashing experiment");
    ExperimentConfig rc;
    rc.experiment = ExperimentKind::RehashLongrun;
    std::size_t rh_alpha = 16;
    std::uint64_t rh_kprime = 0;
    std::uint64_t rh_reps = 1024;
    std::string rh_mode = "FULL-FLUSH";
    std::string rh_kind = "LRU";
    std::uint64_t rh_threshold = 0;
    double rh_exponent = 2.0;
    bool rh_no_control = false;
    rh->add_option("--k", rc.k, "Total cache slots")->capture_default_str();
    rh->add_option("--alpha", rh_alpha, "Bucket size")->capture_default_str();
    rh->add_option("--kprime", rh_kprime, "Cycled set size (default ceil((1-delta)k))");
    rh->add_option("--reps", rh_reps, "Cycle repetitions")->capture_default_str();
    rh->add_option("--mode", rh_mode, "FULL-FLUSH or INCREMENTAL")->capture_default_str();
    rh->add_option("--kind", rh_kind, "Eviction policy")->capture_default_str();
    rh->add_option("--threshold", rh_threshold, "Misses per rehash (0 = k^d)")
        ->capture_default_str();
    rh->add_option("--exponent", rh_exponent, "d in the k^d default")->capture_default_str();
    rh->add_option("--seeds", rc.seeds, "Hash seeds")->capture_default_str();
    rh->add_flag("--no-control", rh_no_control, "Skip the NONE-mode control run");

    // ---- audit-classes ----
    auto* ac = app.add_subcommand("audit-classes", "Algorithm-class audit");
    unsigned ac_universe = 4, ac_maxlen = 8;
    std::vector<std::size_t> ac_caps{2, 3, 4};
    std::uint64_t ac_budget = 10'000'000;
    std::vector<std::string> ac_kinds{"LRU", "LRU-2", "LFU", "FIFO", "CLOCK",
                                      "FLUSH-WHEN-FULL", "REUSE-DISTANCE"};
    std::vector<std::string> ac_checks{"lazy", "conservative", "stack", "stable",
                                       "conforms", "monotone", "self-similar", "belady"};
    ac->add_option("--universe", ac_universe, "Distinct items")->capture_default_str();
    ac->add_option("--max-len", ac_maxlen, "Maximum trace length")->capture_default_str();
    ac->add_option("--capacities", ac_caps, "Cache capacities")->capture_default_str();
    ac->add_option("--budget", ac_budget, "Trace enumeration budget")->capture_default_str();
    ac->add_option("--kinds", ac_kinds, "Policies to audit")->capture_default_str();
    ac->add_option("--checks", ac_checks, "Predicates to run")->capture_default_str();

    // ---- audit-ballsbins ----
    auto* bb = app.add_subcommand("audit-ballsbins", "Balls-and-bins bound audit");
    std::uint64_t bb_trials = 10'000;
    std::uint64_t bb_seed = 1;
    bb->add_option("--trials", bb_trials, "Monte Carlo trials per grid point")
        ->capture_default_str();
    bb->add_option("--seed", bb_seed, "Stream seed")->capture_default_str();

    // ---- pair-run ----
    auto* pr = app.add_subcommand("pair-run", "Set-associative vs fully associative run");
    std::string pr_trace;
    std::size_t pr_k = 64, pr_alpha = 8, pr_ref_capacity = 0;
    std::string pr_kind = "LRU", pr_ref_kind;
    std::uint64_t pr_seed = 1;
    std::string pr_rehash = "NONE";
    std::uint64_t pr_threshold = 0;
    double pr_exponent = 2.0;
    pr->add_option("--trace", pr_trace, "Trace source spec or file:PATH")->required();
    pr->add_option("--k", pr_k, "Total cache slots")->capture_default_str();
    pr->add_option("--alpha", pr_alpha, "Bucket size")->capture_default_str();
    pr->add_option("--kind", pr_kind, "Eviction policy")->capture_default_str();
    pr->add_option("--ref-kind", pr_ref_kind, "Reference policy (default --kind)");
    pr->add_option("--ref-capacity", pr_ref_capacity, "Reference capacity")->required();
    pr->add_option("--seed", pr_seed, "Hash seed")->capture_default_str();
    pr->add_option("--rehash-mode", pr_rehash, "NONE, FULL-FLUSH or INCREMENTAL")
        ->capture_default_str();
    pr->add_option("--rehash-threshold", pr_threshold, "Misses per rehash (0 = k^d)")
        ->capture_default_str();
    pr->add_option("--rehash-exponent", pr_exponent, "d in the k^d default")
        ->capture_default_str();

    // ---- gen-trace ----
    auto* gt = app.add_subcommand("gen-trace", "Generate a trace file");
    std::string gt_spec;
    std::string gt_format = "text";
    std::uint64_t gt_seed = 1;
    std::size_t gt_k = 64, gt_alpha = 8;
    double gt_delta = 0.5;
    gt->add_option("--gen", gt_spec, "Trace source spec")->required();
    gt->add_option("--trace-format", gt_format, "text or binary")->capture_default_str();
    gt->add_option("--seed", gt_seed, "Generator seed")->capture_default_str();
    gt->add_option("--k", gt_k, "Cache size context for adversary specs")
        ->capture_default_str();
    gt->add_option("--alpha", gt_alpha, "Bucket size context")->capture_default_str();
    gt->add_option("--delta", gt_delta, "Capacity gap context")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            sc.delta = parse_delta(sweep_delta);
            sc.kind = PolicyKind::parse(sweep_kind);
            sc.rehash = rehash_from(sweep_rehash, sweep_threshold, sweep_exponent);
            sc.output = out;
            sc.format = format;
            emit_rows(out, format, to_json(sc), run_threshold_sweep(sc));
        } else if (*rh) {
            rc.kind = PolicyKind::parse(rh_kind);
            rc.alpha_grid = {rh_alpha};
            rc.rehash = rehash_from(rh_mode, rh_threshold, rh_exponent);
            rc.output = out;
            rc.format = format;
            std::string spec = "cycler:reps=" + std::to_string(rh_reps);
            if (rh_kprime != 0) {
                spec += ",kprime=" + std::to_string(rh_kprime);
                rc.delta = 1.0 - static_cast<double>(rh_kprime) / static_cast<double>(rc.k);
            }
            rc.trace_source = spec;
            emit_rows(out, format, to_json(rc), run_rehash_longrun(rc, !rh_no_control));
        } else if (*ac) {
            SearchSpace space{ac_universe, ac_maxlen, ac_caps, ac_budget};
            std::vector<ClassVerdict> rows;
            for (const std::string& ks : ac_kinds) {
                const PolicyKind kind = PolicyKind::parse(ks);
                for (const std::string& check : ac_checks) {
                    if (check == "lazy") rows.push_back(check_lazy(kind, space));
                    else if (check == "conservative")
                        for (std::size_t cap : space.capacities)
                            rows.push_back(check_conservative(kind, space, cap));
                    else if (check == "stack") rows.push_back(check_stack(kind, space));
                    else if (check == "stable") rows.push_back(check_stable(kind, space));
                    else if (check == "conforms") {
                        if (kind.has_order_family()) rows.push_back(check_conforms(kind, space));
                    } else if (check == "monotone") {
                        if (kind.has_order_family())
                            rows.push_back(check_family_monotone(kind, space));
                    } else if (check == "self-similar") {
                        if (kind.has_order_family())
                            rows.push_back(check_family_self_similar(kind, space));
                    } else if (check == "belady") {
                        rows.push_back(find_belady_anomaly(kind, space));
                    } else {
                        throw std::invalid_argument("unknown check: " + check);
                    }
                }
            }
            Json cfg{{"experiment", "CLASS-AUDIT"},
                     {"universe", ac_universe},
                     {"max_len", ac_maxlen},
                     {"capacities", ac_caps},
                     {"budget", ac_budget},
                     {"kinds", ac_kinds},
                     {"checks", ac_checks}};
            emit_rows(out, format, cfg, rows);
        } else if (*bb) {
            Json cfg{{"experiment", "BALLSBINS-AUDIT"}, {"trials", bb_trials}, {"seed", bb_seed}};
            emit_rows(out, format, cfg, default_ballsbins_audit(bb_trials, bb_seed));
        } else if (*pr) {
            RowContext row{pr_k, pr_alpha, 0.5, pr_ref_capacity, pr_seed};
            const Trace trace = materialize_trace(pr_trace, row);
            SetAssocCache cache(pr_k, pr_alpha, PolicyKind::parse(pr_kind), pr_seed,
                                rehash_from(pr_rehash, pr_threshold, pr_exponent));
            const PolicyKind ref_kind =
                pr_ref_kind.empty() ? PolicyKind::parse(pr_kind) : PolicyKind::parse(pr_ref_kind);
            const PairRunReport rep = run_pair(trace, cache, ref_kind, pr_ref_capacity);
            Json cfg{{"experiment", "PAIR-RUN"},     {"trace", pr_trace},
                     {"k", pr_k},                    {"alpha", pr_alpha},
                     {"kind", pr_kind},              {"ref_kind", ref_kind.name()},
                     {"ref_capacity", pr_ref_capacity}, {"seed", pr_seed},
                     {"rehash_mode", pr_rehash}};
            Json body;
            body["meta"] = make_meta(cfg);
            body["misses_test"] = rep.misses_test;
            body["misses_ref"] = rep.misses_ref;
            body["bad_evictions"] = rep.bad_evictions;
            body["flush_evictions"] = rep.flush_evictions;
            body["ledger_violations"] = rep.ledger_violations;
            if (parse_report_format(format) == ReportFormat::Csv) {
                std::string text =
                    "misses_test,misses_ref,bad_evictions,flush_evictions,ledger_violations\n";
                text += std::to_string(rep.misses_test) + ',' + std::to_string(rep.misses_ref) +
                        ',' + std::to_string(rep.bad_evictions) + ',' +
                        std::to_string(rep.flush_evictions) + ',' +
                        std::to_string(rep.ledger_violations) + '\n';
                emit(out, text);
            } else {
                emit(out, body.dump(2) + "\n");
            }
        } else if (*gt) {
            RowContext row{gt_k, gt_alpha, gt_delta,
                           static_cast<std::uint64_t>(std::ceil(
                               (1.0 - gt_delta) * static_cast<double>(gt_k))),
                           gt_seed};
            const Trace trace = materialize_trace(gt_spec, row);
            if (out.empty() || out == "-")
                throw std::invalid_argument("gen-trace needs --out FILE");
            save_trace(trace, out, parse_trace_format(gt_format));
        }
    } catch (const std::exception& e) {
        Json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
