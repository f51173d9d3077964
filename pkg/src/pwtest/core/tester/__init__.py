"""Test decisions, permutation p-values and power evaluation"""

from .experiments import (
    CalibrationResult,
    ConvergenceRow,
    calibrate,
    convergence_frame,
    convergence_medians,
    convergence_probe,
)
from .permutation import (
    DEFAULT_PERMUTATIONS,
    MIN_PERMUTATIONS,
    canonical_pool,
    permutation_null,
    permutation_pvalue,
    pvalue_from_null,
)
from .roc import MIN_TRIALS, RocCurve, empirical_null_quantile, evaluate_roc, roc_from_statistics, trial_statistics
from .verdict import MODES, Decision, TestVerdict, run_test

__all__ = [
    "CalibrationResult",
    "ConvergenceRow",
    "DEFAULT_PERMUTATIONS",
    "Decision",
    "MIN_PERMUTATIONS",
    "MIN_TRIALS",
    "MODES",
    "RocCurve",
    "TestVerdict",
    "calibrate",
    "canonical_pool",
    "convergence_frame",
    "convergence_medians",
    "convergence_probe",
    "empirical_null_quantile",
    "evaluate_roc",
    "permutation_null",
    "permutation_pvalue",
    "pvalue_from_null",
    "roc_from_statistics",
    "run_test",
    "trial_statistics",
]
