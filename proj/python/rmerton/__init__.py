"""Robust log-utility portfolio toolkit.

Mean-reverting drift, GARCH-diffusion squared volatility, and box-valued
ambiguity over their mean-reversion parameters. The heavy lifting lives in
the C++ core; this package re-exports the bound operations.
"""

from ._core import (
    ParamBox,
    ParamQuadruple,
    SimConfig,
    box_midpoint,
    brute_force_worst_corner,
    check_admissible,
    convergence_order,
    corner_set,
    load_config,
    merton_fraction,
    minimax_gap,
    ou_exact_step,
    running_integrand,
    select_corner,
    simulate_terminals,
    validate_box,
    value_classical,
    value_robust,
    variance_step,
)

__all__ = [
    "ParamBox",
    "ParamQuadruple",
    "SimConfig",
    "box_midpoint",
    "brute_force_worst_corner",
    "check_admissible",
    "convergence_order",
    "corner_set",
    "load_config",
    "merton_fraction",
    "minimax_gap",
    "ou_exact_step",
    "running_integrand",
    "select_corner",
    "simulate_terminals",
    "validate_box",
    "value_classical",
    "value_robust",
    "variance_step",
]
