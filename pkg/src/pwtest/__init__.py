"""
pwtest: Two-Sample Testing with Projected Wasserstein Distance

Hypothesis tests of H0: mu = nu for high-dimensional samples:
- Projected Wasserstein statistic estimated by penalized SGD
- Kernel MMD baseline
- Finite-sample acceptance thresholds and permutation p-values
- Seeded synthetic benchmarks and ROC / AUC power evaluation
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .core import (
    ConfigError,
    DatasetSpec,
    DimensionError,
    DivergenceError,
    MmdConfig,
    PwConfig,
    PwEstimate,
    PwTestError,
    RngSeed,
    SampleSet,
    TestVerdict,
    estimate_pw,
    evaluate_roc,
    generate,
    mmd_biased,
    permutation_pvalue,
    run_test,
)

__all__ = [
    "ConfigError",
    "DatasetSpec",
    "DimensionError",
    "DivergenceError",
    "MmdConfig",
    "PwConfig",
    "PwEstimate",
    "PwTestError",
    "RngSeed",
    "SampleSet",
    "TestVerdict",
    "estimate_pw",
    "evaluate_roc",
    "generate",
    "mmd_biased",
    "permutation_pvalue",
    "run_test",
]
