"""Exact solution counts for power-sum systems and related constants."""

import json as _json

from ._vinolab import (
    BudgetExceeded,
    ConfigInvalid,
    Error,
    InvalidArgument,
    NoConvergence,
    TooLarge,
    brute_force_count as _brute_force_count,
    congruence_max,
    constrained_count as _constrained_count,
    dft_mean_value,
    mean_value,
    multigrade_search,
    permissible_exponent,
    run_config as _run_config,
    singular_integral,
    singular_series,
    theorem_table,
    verify,
    vinogradov_mean_value,
    waring_count,
    waring_main_term,
    weyl_sum,
)


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def constrained_count(spec, threads=1):
    """Count for a system spec given as a dict or JSON text."""
    return _constrained_count(_text(spec), threads)


def brute_force_count(spec):
    return _brute_force_count(_text(spec))


def run_config(config):
    """Runs an experiment config (dict or JSON text); returns (format, text, failures)."""
    return _run_config(_text(config))
