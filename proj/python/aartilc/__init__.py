"""Probe-drogue docking simulation with terminal iterative learning control."""

from ._core import (
    certify,
    certify_scenario,
    iterate_recursion,
    monte_carlo,
    run_campaign,
    asymptotic_error_bound,
    validate_gains,
)

__all__ = [
    "certify",
    "certify_scenario",
    "iterate_recursion",
    "monte_carlo",
    "run_campaign",
    "asymptotic_error_bound",
    "validate_gains",
]
