"""Acceptance thresholds from finite-sample concentration bounds"""

from .thresholds import (
    EstimatedConstants,
    ThresholdParams,
    concentration_probability,
    estimate_constants,
    ipm_threshold,
    method_threshold,
    mmd_threshold,
    mmd_threshold_two_sample,
    pw_threshold,
    rademacher_bound_kernel,
    rademacher_bound_projected,
    sigmoid_preprocess,
    threshold_report,
)

__all__ = [
    "EstimatedConstants",
    "ThresholdParams",
    "concentration_probability",
    "estimate_constants",
    "ipm_threshold",
    "method_threshold",
    "mmd_threshold",
    "mmd_threshold_two_sample",
    "pw_threshold",
    "rademacher_bound_kernel",
    "rademacher_bound_projected",
    "sigmoid_preprocess",
    "threshold_report",
]
