"""
Two-sample test decisions
Threshold tests from the concentration bounds and permutation tests
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from ..bounds import ThresholdParams, method_threshold, sigmoid_preprocess, threshold_report
from ..errors import ConfigError, DimensionError
from ..estimators import get_statistic
from ..samples import RngSeed, SampleSet
from .permutation import DEFAULT_PERMUTATIONS, permutation_pvalue

logger = logging.getLogger(__name__)

MODES = ("threshold", "permutation")


class Decision(Enum):
    ACCEPT_H0 = "ACCEPT_H0"
    REJECT_H0 = "REJECT_H0"


@dataclass(frozen=True)
class TestVerdict:
    """
    Outcome of one two-sample test

    In threshold mode decision is REJECT_H0 iff statistic >= threshold; in
    permutation mode it is REJECT_H0 iff p_value <= alpha.
    """

    __test__ = False  # not a pytest class

    statistic: float
    method: str
    threshold: Optional[float] = None
    decision: Optional[Decision] = None
    p_value: Optional[float] = None
    permutations_used: int = 0
    alpha: Optional[float] = None
    mode: str = "threshold"
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def rejected(self) -> bool:
        return self.decision is Decision.REJECT_H0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statistic": self.statistic,
            "threshold": self.threshold,
            "decision": None if self.decision is None else self.decision.value,
            "p_value": self.p_value,
            "method": self.method,
            "permutations_used": self.permutations_used,
            "alpha": self.alpha,
            "mode": self.mode,
            "details": self.details,
        }


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")


def run_test(X: SampleSet, Y: SampleSet, method: str = "pw", alpha: float = 0.05, method_config=None,
             mode: str = "threshold", permutations: int = DEFAULT_PERMUTATIONS, seed: RngSeed = RngSeed(0),
             sigmoid: bool = False, jobs: Optional[int] = 1) -> TestVerdict:
    """
    Run a two-sample test of H0: mu = nu

    Args:
        X: n x d sample from mu
        Y: m x d sample from nu
        method: 'pw' or 'mmd'
        alpha: Level of the test, in (0, 1)
        method_config: PwConfig / MmdConfig / dict for the statistic
        mode: 'threshold' (analytic acceptance region) or 'permutation'
        permutations: Number of splits in permutation mode
        seed: Root stream for the statistic and the splits
        sigmoid: Map both samples through the entrywise sigmoid first
        jobs: Worker processes in permutation mode

    Returns:
        TestVerdict

    Raises:
        ConfigError: On an invalid alpha, mode or method
        DimensionError: If X and Y have different dimensions
    """
    _check_alpha(alpha)
    if mode not in MODES:
        raise ConfigError(f"Unknown mode '{mode}'. Supported: {list(MODES)}")
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    if sigmoid:
        X, Y = sigmoid_preprocess(X), sigmoid_preprocess(Y)

    statistic_fn = get_statistic(method, method_config)
    statistic = float(statistic_fn(X, Y, seed.derive("statistic")))
    details = {"sigmoid": sigmoid, "config": statistic_fn.config_dict(), "n": X.n, "m": Y.n, "d": X.d}

    if mode == "threshold":
        k = getattr(statistic_fn.config, "k", 1)
        params = ThresholdParams.from_samples(X, Y, alpha, k=k)
        threshold = method_threshold(statistic_fn.name, params)
        details["threshold_report"] = threshold_report(params, statistic_fn.name)
        decision = Decision.REJECT_H0 if statistic >= threshold else Decision.ACCEPT_H0
        verdict = TestVerdict(statistic=statistic, method=statistic_fn.name, threshold=threshold,
                              decision=decision, alpha=alpha, mode=mode, details=details)
    else:
        p_value = permutation_pvalue(X, Y, statistic_fn, permutations, seed, jobs, observed=statistic)
        decision = Decision.REJECT_H0 if p_value <= alpha else Decision.ACCEPT_H0
        verdict = TestVerdict(statistic=statistic, method=statistic_fn.name, decision=decision,
                              p_value=p_value, permutations_used=int(permutations), alpha=alpha,
                              mode=mode, details=details)

    logger.info(f"{verdict.method.upper()} {mode} test: statistic={statistic:.6g} -> {decision.value}")
    return verdict
