#include "pagelab/report.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace pagelab {

ReportFormat parse_report_format(const std::string& text) {
    if (text == "csv" || text == "CSV") return ReportFormat::Csv;
    if (text == "json" || text == "JSON") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + text);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

namespace {

std::string join_ids(const std::vector<ItemId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(ids[i]);
    }
    return s;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string render_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "alpha,delta,k_prime,misses_sa,misses_fa,bad_evictions,flush_evictions,ratio,seed\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.alpha) + ',' + format_double(r.delta) + ',' +
               std::to_string(r.k_prime) + ',' + std::to_string(r.misses_sa) + ',' +
               std::to_string(r.misses_fa) + ',' + std::to_string(r.bad_evictions) + ',' +
               std::to_string(r.flush_evictions) + ',' + format_double(r.ratio) + ',' +
               std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string render_csv(const std::vector<RehashRow>& rows) {
    std::string out =
        "mode,seed,checkpoint_reps,misses_sa,misses_fa,ratio,bad_evictions,flush_evictions\n";
    for (const RehashRow& r : rows) {
        out += r.mode + ',' + std::to_string(r.seed) + ',' + std::to_string(r.checkpoint_reps) +
               ',' + std::to_string(r.misses_sa) + ',' + std::to_string(r.misses_fa) + ',' +
               format_double(r.ratio) + ',' + std::to_string(r.bad_evictions) + ',' +
               std::to_string(r.flush_evictions) + '\n';
    }
    return out;
}

std::string render_csv(const std::vector<ClassVerdict>& rows) {
    std::string out =
        "predicate,kind,pass,witness_trace,witness_subset,witness_z,cap_a,cap_b,"
        "window_begin,window_end,violating,detail,traces_checked\n";
    for (const ClassVerdict& v : rows) {
        out += to_string(v.predicate) + ',' + v.kind + ',' + (v.pass ? "true" : "false") + ',';
        if (v.witness) {
            const ClassWitness& w = *v.witness;
            out += csv_quote(join_ids(w.trace)) + ',' + csv_quote(join_ids(w.subset)) + ',' +
                   std::to_string(w.z) + ',' + std::to_string(w.cap_a) + ',' +
                   std::to_string(w.cap_b) + ',' + std::to_string(w.window_begin) + ',' +
                   std::to_string(w.window_end) + ',' + csv_quote(join_ids(w.violating)) + ',' +
                   csv_quote(w.detail) + ',';
        } else {
            out += R"("","",0,0,0,0,0,"","",)";
        }
        out += std::to_string(v.traces_checked) + '\n';
    }
    return out;
}

std::string render_csv(const std::vector<BallsBinsAuditRow>& rows) {
    std::string out =
        "check,n,m,alpha,epsilon,trials,seed,estimate,stderr,bound,holds,hypothesis_met\n";
    for (const BallsBinsAuditRow& r : rows) {
        out += r.check + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
               std::to_string(r.alpha) + ',' + format_double(r.epsilon) + ',' +
               std::to_string(r.trials) + ',' + std::to_string(r.seed) + ',' +
               format_double(r.estimate) + ',' + format_double(r.stderr_) + ',' +
               format_double(r.bound) + ',' + (r.holds ? "true" : "false") + ',' +
               (r.hypothesis_met ? "true" : "false") + '\n';
    }
    return out;
}

Json to_json(const SweepRow& r) {
    return Json{{"alpha", r.alpha},
                {"delta", r.delta},
                {"k_prime", r.k_prime},
                {"misses_sa", r.misses_sa},
                {"misses_fa", r.misses_fa},
                {"bad_evictions", r.bad_evictions},
                {"flush_evictions", r.flush_evictions},
                {"ratio", r.ratio},
                {"seed", r.seed}};
}

Json to_json(const RehashRow& r) {
    return Json{{"mode", r.mode},
                {"seed", r.seed},
                {"checkpoint_reps", r.checkpoint_reps},
                {"misses_sa", r.misses_sa},
                {"misses_fa", r.misses_fa},
                {"ratio", r.ratio},
                {"bad_evictions", r.bad_evictions},
                {"flush_evictions", r.flush_evictions}};
}

Json to_json(const ClassVerdict& v) {
    Json j{{"predicate", to_string(v.predicate)},
           {"kind", v.kind},
           {"pass", v.pass},
           {"traces_checked", v.traces_checked},
           {"space",
            {{"universe", v.space.universe},
             {"max_len", v.space.max_len},
             {"capacities", v.space.capacities}}}};
    if (v.witness) {
        const ClassWitness& w = *v.witness;
        j["witness"] = Json{{"trace", w.trace},       {"subset", w.subset},
                            {"z", w.z},               {"cap_a", w.cap_a},
                            {"cap_b", w.cap_b},       {"window_begin", w.window_begin},
                            {"window_end", w.window_end}, {"violating", w.violating},
                            {"detail", w.detail}};
    }
    return j;
}

Json to_json(const BallsBinsAuditRow& r) {
    return Json{{"check", r.check},   {"n", r.n},
                {"m", r.m},           {"alpha", r.alpha},
                {"epsilon", r.epsilon}, {"trials", r.trials},
                {"seed", r.seed},     {"estimate", r.estimate},
                {"stderr", r.stderr_}, {"bound", r.bound},
                {"holds", r.holds},   {"hypothesis_met", r.hypothesis_met}};
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    switch (c.experiment) {
        case ExperimentKind::ThresholdSweep: j["experiment"] = "THRESHOLD-SWEEP"; break;
        case ExperimentKind::RehashLongrun: j["experiment"] = "REHASH-LONGRUN"; break;
        case ExperimentKind::ClassAudit: j["experiment"] = "CLASS-AUDIT"; break;
        case ExperimentKind::BallsBinsAudit: j["experiment"] = "BALLSBINS-AUDIT"; break;
        case ExperimentKind::PairRun: j["experiment"] = "PAIR-RUN"; break;
    }
    j["k"] = c.k;
    j["alpha_grid"] = c.alpha_grid;
    if (c.delta) j["delta"] = *c.delta;
    else j["delta"] = "AUTO";
    j["c"] = c.c;
    j["kind"] = c.kind.name();
    j["rehash"] = Json{{"mode", to_string(c.rehash.mode)},
                       {"threshold", c.rehash.threshold},
                       {"exponent", c.rehash.exponent}};
    j["trace_source"] = c.trace_source;
    j["seeds"] = c.seeds;
    j["output"] = c.output;
    j["format"] = c.format;
    return j;
}

Json make_meta(const Json& config) {
    Json meta;
    meta["tool"] = "pagelab";
    meta["version"] = "0.1.0";
    meta["config"] = config;
    return meta;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace pagelab
