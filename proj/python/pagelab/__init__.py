"""Set-associative paging simulation laboratory (C++ core bindings)."""

from _pagelab import (  # noqa: F401
    AccessOutcome,
    Policy,
    PolicyKind,
    RehashConfig,
    SaAccessOutcome,
    SetAssocCache,
    check_class,
    compute_opt_cost,
    exact_overflow_probability,
    f_bound,
    fixed_set_cycler,
    load_trace,
    mc_overflow_probability,
    replay,
    run_pair,
    save_trace,
    tradeoff_adversary,
    zipf_trace,
)

__all__ = [
    "AccessOutcome",
    "Policy",
    "PolicyKind",
    "RehashConfig",
    "SaAccessOutcome",
    "SetAssocCache",
    "check_class",
    "compute_opt_cost",
    "exact_overflow_probability",
    "f_bound",
    "fixed_set_cycler",
    "load_trace",
    "mc_overflow_probability",
    "replay",
    "run_pair",
    "save_trace",
    "tradeoff_adversary",
    "zipf_trace",
]
