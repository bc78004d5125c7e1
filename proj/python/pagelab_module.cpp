#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pagelab/adversary.hpp"
#include "pagelab/balls_bins.hpp"
#include "pagelab/class_checks.hpp"
#include "pagelab/experiments.hpp"
#include "pagelab/opt_cost.hpp"
#include "pagelab/set_assoc.hpp"
#include "pagelab/trace_io.hpp"

namespace py = pybind11;
using namespace pagelab;

namespace {

py::dict witness_dict(const ClassWitness& w) {
    py::dict d;
    d["trace"] = w.trace;
    d["subset"] = w.subset;
    d["z"] = w.z;
    d["cap_a"] = w.cap_a;
    d["cap_b"] = w.cap_b;
    d["window_begin"] = w.window_begin;
    d["window_end"] = w.window_end;
    d["violating"] = w.violating;
    d["detail"] = w.detail;
    return d;
}

py::dict verdict_dict(const ClassVerdict& v) {
    py::dict d;
    d["predicate"] = to_string(v.predicate);
    d["kind"] = v.kind;
    d["pass"] = v.pass;
    d["traces_checked"] = v.traces_checked;
    d["witness"] = v.witness ? py::object(witness_dict(*v.witness)) : py::object(py::none());
    return d;
}

} // namespace

PYBIND11_MODULE(_pagelab, m) {
    m.doc() = "Set-associative paging simulation laboratory";

    py::class_<PolicyKind>(m, "PolicyKind")
        .def_static("parse", &PolicyKind::parse)
        .def_static("lru", &PolicyKind::lru)
        .def_static("lru_k", &PolicyKind::lru_k)
        .def_static("lfu", &PolicyKind::lfu)
        .def_static("fifo", &PolicyKind::fifo)
        .def_static("clock", &PolicyKind::clock)
        .def_static("flush_when_full", &PolicyKind::flush_when_full)
        .def_static("reuse_distance", &PolicyKind::reuse_distance)
        .def_property_readonly("has_order_family", &PolicyKind::has_order_family)
        .def("__repr__", [](const PolicyKind& k) { return "PolicyKind(" + k.name() + ")"; })
        .def("__str__", &PolicyKind::name);

    py::class_<AccessOutcome>(m, "AccessOutcome")
        .def_readonly("hit", &AccessOutcome::hit)
        .def_readonly("evicted", &AccessOutcome::evicted);

    py::class_<Policy>(m, "Policy")
        .def(py::init<PolicyKind, std::size_t>(), py::arg("kind"), py::arg("capacity"))
        .def("access", &Policy::access)
        .def("contents", [](const Policy& p) {
            return std::vector<ItemId>(p.contents().begin(), p.contents().end());
        })
        .def("contains", &Policy::contains)
        .def("erase", &Policy::erase)
        .def_property_readonly("capacity", &Policy::capacity)
        .def_property_readonly("clock", &Policy::clock);

    m.def(
        "replay",
        [](const std::string& kind, std::size_t capacity, const Trace& trace) {
            const auto r = replay(PolicyKind::parse(kind), capacity, trace);
            py::dict d;
            d["misses"] = r.misses;
            d["contents"] = std::vector<ItemId>(r.final_contents.begin(), r.final_contents.end());
            return d;
        },
        py::arg("kind"), py::arg("capacity"), py::arg("trace"));

    py::class_<SaAccessOutcome>(m, "SaAccessOutcome")
        .def_readonly("hit", &SaAccessOutcome::hit)
        .def_readonly("evicted", &SaAccessOutcome::evicted)
        .def_readonly("rehash_evicted", &SaAccessOutcome::rehash_evicted);

    py::class_<RehashConfig>(m, "RehashConfig")
        .def(py::init([](const std::string& mode, std::uint64_t threshold, double exponent) {
                 RehashConfig rc;
                 rc.mode = parse_rehash_mode(mode);
                 rc.threshold = threshold;
                 rc.exponent = exponent;
                 return rc;
             }),
             py::arg("mode") = "NONE", py::arg("threshold") = 0, py::arg("exponent") = 2.0);

    py::class_<SetAssocCache>(m, "SetAssocCache")
        .def(py::init([](std::size_t k, std::size_t alpha, const std::string& kind,
                         std::uint64_t seed, const RehashConfig& rehash) {
                 return SetAssocCache(k, alpha, PolicyKind::parse(kind), seed, rehash);
             }),
             py::arg("k"), py::arg("alpha"), py::arg("kind") = "LRU", py::arg("seed") = 1,
             py::arg("rehash") = RehashConfig{})
        .def("access", &SetAssocCache::access)
        .def("contents", [](const SetAssocCache& c) {
            const auto s = c.contents();
            return std::vector<ItemId>(s.begin(), s.end());
        })
        .def("trigger_full_flush", &SetAssocCache::trigger_full_flush)
        .def("begin_incremental_rehash", &SetAssocCache::begin_incremental_rehash)
        .def("incremental_evict_step", &SetAssocCache::incremental_evict_step)
        .def_property_readonly("misses", &SetAssocCache::misses)
        .def_property_readonly("bucket_count", &SetAssocCache::bucket_count)
        .def_property_readonly("rehash_in_progress", &SetAssocCache::rehash_in_progress)
        .def_property_readonly("pending_remap_count", &SetAssocCache::pending_remap_count);

    m.def(
        "run_pair",
        [](const Trace& trace, std::size_t k, std::size_t alpha, const std::string& kind,
           std::uint64_t seed, std::size_t ref_capacity, const RehashConfig& rehash) {
            SetAssocCache cache(k, alpha, PolicyKind::parse(kind), seed, rehash);
            const auto r = run_pair(trace, cache, PolicyKind::parse(kind), ref_capacity);
            py::dict d;
            d["misses_test"] = r.misses_test;
            d["misses_ref"] = r.misses_ref;
            d["bad_evictions"] = r.bad_evictions;
            d["flush_evictions"] = r.flush_evictions;
            d["ledger_violations"] = r.ledger_violations;
            return d;
        },
        py::arg("trace"), py::arg("k"), py::arg("alpha"), py::arg("kind"), py::arg("seed"),
        py::arg("ref_capacity"), py::arg("rehash") = RehashConfig{});

    m.def("tradeoff_adversary",
          [](std::size_t k, std::size_t alpha, double delta, double c,
             std::optional<std::uint64_t> s, std::optional<std::uint64_t> t,
             ItemId universe_start) {
              TradeoffAdversaryParams p{k, alpha, delta, c, s, t};
              return tradeoff_adversary(p, universe_start);
          },
          py::arg("k"), py::arg("alpha"), py::arg("delta"), py::arg("c") = 1.0,
          py::arg("s") = std::nullopt, py::arg("t") = std::nullopt,
          py::arg("universe_start") = 0);
    m.def("fixed_set_cycler", &fixed_set_cycler, py::arg("k_prime"), py::arg("repetitions"),
          py::arg("universe_start") = 0);
    m.def("zipf_trace", &zipf_trace, py::arg("universe_size"), py::arg("exponent"),
          py::arg("length"), py::arg("seed"), py::arg("universe_start") = 0);

    m.def("f_bound", &f_bound, py::arg("n"), py::arg("m"), py::arg("epsilon"));
    m.def(
        "exact_overflow_probability",
        [](std::uint64_t m, std::uint64_t n, std::uint64_t alpha) {
            const auto e = exact_overflow_probability(m, n, alpha);
            return py::make_tuple(e.numerator, e.denominator, e.value);
        },
        py::arg("m"), py::arg("n"), py::arg("alpha"));
    m.def(
        "mc_overflow_probability",
        [](std::uint64_t m, std::uint64_t n, std::uint64_t trials, std::uint64_t seed,
           std::uint64_t alpha) {
            const auto e = mc_overflow_probability({m, n, trials, seed}, alpha);
            return py::make_tuple(e.estimate, e.stderr_);
        },
        py::arg("m"), py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("alpha"));

    m.def("compute_opt_cost", &compute_opt_cost, py::arg("trace"), py::arg("k"));

    m.def(
        "check_class",
        [](const std::string& predicate, const std::string& kind, unsigned universe,
           unsigned max_len, const std::vector<std::size_t>& capacities, std::uint64_t budget) {
            SearchSpace space{universe, max_len, capacities, budget};
            const PolicyKind pk = PolicyKind::parse(kind);
            ClassVerdict v;
            if (predicate == "lazy") v = check_lazy(pk, space);
            else if (predicate == "conservative")
                v = check_conservative(pk, space, capacities.at(0));
            else if (predicate == "stack") v = check_stack(pk, space);
            else if (predicate == "stable") v = check_stable(pk, space);
            else if (predicate == "conforms") v = check_conforms(pk, space);
            else if (predicate == "monotone") v = check_family_monotone(pk, space);
            else if (predicate == "self-similar") v = check_family_self_similar(pk, space);
            else if (predicate == "belady") v = find_belady_anomaly(pk, space);
            else throw std::invalid_argument("unknown predicate: " + predicate);
            return verdict_dict(v);
        },
        py::arg("predicate"), py::arg("kind"), py::arg("universe") = 4, py::arg("max_len") = 8,
        py::arg("capacities") = std::vector<std::size_t>{2, 3, 4},
        py::arg("budget") = 10'000'000);

    m.def(
        "load_trace",
        [](const std::string& path, const std::string& format) {
            return load_trace(path, parse_trace_format(format));
        },
        py::arg("path"), py::arg("format") = "text");
    m.def(
        "save_trace",
        [](const Trace& trace, const std::string& path, const std::string& format) {
            save_trace(trace, path, parse_trace_format(format));
        },
        py::arg("trace"), py::arg("path"), py::arg("format") = "text");
}
