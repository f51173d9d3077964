"""Core modules: data model, transport, potentials, statistics, bounds, datasets and tests"""

from .errors import (
    ConfigError,
    DegenerateDataError,
    DimensionError,
    DivergenceError,
    EmptyInputError,
    PwTestError,
    RankError,
    SizeLimitError,
)
from .samples import (
    GroundMetric,
    ProjectionMatrix,
    RngSeed,
    SampleSet,
    canonical_signs,
    orthogonality_defect,
    orthonormalize,
    project,
    random_projection,
)
from .transport import TransportResult, w1_1d, w1_exact_small
from .potentials import PotentialNetwork, init_network
from .estimators import (
    BaseStatistic,
    MmdConfig,
    PwConfig,
    PwEstimate,
    estimate_pw,
    get_statistic,
    mmd_biased,
    penalty_gap_probe,
    pw_grid_oracle_k1,
)
from .bounds import ThresholdParams, estimate_constants, pw_threshold, sigmoid_preprocess, threshold_report
from .datasets import DatasetSpec, generate, h0_pair, h1_pair, kde_export
from .tester import TestVerdict, calibrate, convergence_probe, evaluate_roc, permutation_pvalue, run_test

__all__ = [
    "BaseStatistic",
    "ConfigError",
    "DatasetSpec",
    "DegenerateDataError",
    "DimensionError",
    "DivergenceError",
    "EmptyInputError",
    "GroundMetric",
    "MmdConfig",
    "PotentialNetwork",
    "ProjectionMatrix",
    "PwConfig",
    "PwEstimate",
    "PwTestError",
    "RankError",
    "RngSeed",
    "SampleSet",
    "SizeLimitError",
    "TestVerdict",
    "ThresholdParams",
    "TransportResult",
    "calibrate",
    "canonical_signs",
    "convergence_probe",
    "estimate_constants",
    "estimate_pw",
    "evaluate_roc",
    "generate",
    "get_statistic",
    "h0_pair",
    "h1_pair",
    "init_network",
    "kde_export",
    "mmd_biased",
    "orthogonality_defect",
    "orthonormalize",
    "penalty_gap_probe",
    "permutation_pvalue",
    "project",
    "pw_grid_oracle_k1",
    "pw_threshold",
    "random_projection",
    "run_test",
    "sigmoid_preprocess",
    "threshold_report",
    "w1_1d",
    "w1_exact_small",
]
