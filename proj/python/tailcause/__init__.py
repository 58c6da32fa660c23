"""Causal discovery from the extremes of heavy-tailed linear SCMs."""

from ._tailcause import (
    Scm,
    TailcauseError,
    __version__,
    all_causal_orders,
    ancestors,
    benchmark,
    classify_pair,
    ease,
    ease_trace,
    gamma_estimate,
    gamma_matrix,
    gamma_population,
    hill_tail_index,
    max_sum_tail_ratio,
    mistake_bound_margin,
    path_weights,
    psi_estimate,
    psi_population,
    random_scm,
    resolve_k,
    sample_noise,
    score_order,
    simulate,
    validate_order,
)

__all__ = [
    "Scm",
    "TailcauseError",
    "__version__",
    "all_causal_orders",
    "ancestors",
    "benchmark",
    "classify_pair",
    "ease",
    "ease_trace",
    "gamma_estimate",
    "gamma_matrix",
    "gamma_population",
    "hill_tail_index",
    "max_sum_tail_ratio",
    "mistake_bound_margin",
    "path_weights",
    "psi_estimate",
    "psi_population",
    "random_scm",
    "resolve_k",
    "sample_noise",
    "score_order",
    "simulate",
    "validate_order",
]
