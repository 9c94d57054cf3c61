"""Generalized biased transforms of real distributions."""

from ._core import (
    BiasedDistribution,
    BiasforgeError,
    Distribution,
    bias,
    catalog,
    check_identity_exact,
    complete_homogeneous,
    discrete,
    exponential,
    falling_factorial,
    first_order_bound,
    half_normal,
    hat_transform,
    higher_order_transform,
    normal,
    run_cli,
    run_suite,
    uniform,
)

__all__ = [
    "BiasedDistribution",
    "BiasforgeError",
    "Distribution",
    "bias",
    "catalog",
    "check_identity_exact",
    "complete_homogeneous",
    "discrete",
    "exponential",
    "falling_factorial",
    "first_order_bound",
    "half_normal",
    "hat_transform",
    "higher_order_transform",
    "normal",
    "run_cli",
    "run_suite",
    "uniform",
]
