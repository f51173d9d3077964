"""
Monte-Carlo experiments under the null
Type-I calibration of the threshold test and decay of the PW statistic with n
"""

import logging
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ...orchestrators.parallel import run_indexed
from ..datasets import DatasetSpec, generate, h0_pair
from ..errors import ConfigError
from ..estimators import PwConfig, estimate_pw
from ..samples import RngSeed
from .verdict import run_test

logger = logging.getLogger(__name__)


def _advance(progress: Optional[Callable[[], None]]):
    return (lambda _: progress()) if progress else None


@dataclass(frozen=True)
class CalibrationResult:
    """Empirical rejection rate of the threshold test over trials drawn under H0"""

    rejections: int
    trials: int
    alpha: float
    method: str
    statistics: tuple
    thresholds: tuple

    @property
    def rate(self) -> float:
        return self.rejections / self.trials

    def to_frame(self) -> pd.DataFrame:
        statistics = np.asarray(self.statistics)
        thresholds = np.asarray(self.thresholds)
        return pd.DataFrame({
            "trial": np.arange(self.trials),
            "statistic": statistics,
            "threshold": thresholds,
            "reject": (statistics >= thresholds).astype(int),
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rejections": self.rejections,
            "trials": self.trials,
            "rate": self.rate,
            "alpha": self.alpha,
            "method": self.method,
        }


def _calibration_trial(item):
    spec, method, n, alpha, method_config, sigmoid, trial_seed = item
    spec_x, spec_y = h0_pair(spec)
    X = generate(spec_x, n, trial_seed.derive("x"))
    Y = generate(spec_y, n, trial_seed.derive("y"))
    verdict = run_test(X, Y, method=method, alpha=alpha, method_config=method_config,
                       mode="threshold", seed=trial_seed, sigmoid=sigmoid)
    return verdict.statistic, verdict.threshold


def calibrate(spec: DatasetSpec, method: str = "pw", n: int = 100, trials: int = 200, alpha: float = 0.05,
              seed: RngSeed = RngSeed(0), method_config=None, sigmoid: bool = True,
              jobs: Optional[int] = 1, progress: Optional[Callable[[], None]] = None) -> CalibrationResult:
    """
    Type-I error of the threshold test on n = m draws from the null side of spec

    Raises:
        ConfigError: If trials < 1
    """
    if int(trials) < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    items = [(spec, method, n, alpha, method_config, sigmoid, seed.derive(f"calibrate/{i}"))
             for i in range(int(trials))]
    results = run_indexed(_calibration_trial, items, jobs, on_done=_advance(progress))
    statistics = tuple(s for s, _ in results)
    thresholds = tuple(t for _, t in results)
    rejections = int(sum(s >= t for s, t in results))
    result = CalibrationResult(rejections=rejections, trials=int(trials), alpha=alpha, method=method,
                               statistics=statistics, thresholds=thresholds)
    logger.info(f"Calibration: {rejections}/{trials} rejections (rate {result.rate:.3f}, alpha {alpha})")
    return result


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    seed: int
    statistic: float


def _convergence_trial(item) -> ConvergenceRow:
    spec, n, seed_value, cfg = item
    root = RngSeed(seed_value)
    spec_x, spec_y = h0_pair(spec)
    X = generate(spec_x, n, root.derive("x"))
    Y = generate(spec_y, n, root.derive("y"))
    estimate = estimate_pw(X, Y, replace(cfg, seed=root.derive("statistic")))
    return ConvergenceRow(n=int(n), seed=int(seed_value), statistic=estimate.value)


def convergence_probe(spec: DatasetSpec, sizes: Sequence[int], seeds: Union[int, Sequence[int]] = 20,
                      cfg: PwConfig = PwConfig(), jobs: Optional[int] = 1,
                      progress: Optional[Callable[[], None]] = None) -> List[ConvergenceRow]:
    """
    PW statistic between two independent null-side samples at several sizes

    Args:
        spec: Dataset whose MU side is sampled twice
        sizes: Sample sizes n (= m)
        seeds: Seed values, or a count meaning seeds 0..count-1
        cfg: Optimizer settings; its seed is replaced per row
        progress: Called once per finished row

    Returns:
        Rows ordered by size, then seed
    """
    seeds = list(range(seeds)) if isinstance(seeds, int) else [int(s) for s in seeds]
    sizes = [int(s) for s in sizes]
    if not sizes or not seeds:
        raise ConfigError("convergence_probe needs at least one size and one seed")
    if any(s < 1 for s in sizes):
        raise ConfigError(f"Sample sizes must be >= 1, got {sizes}")
    items = [(spec, n, s, cfg) for n in sizes for s in seeds]
    return run_indexed(_convergence_trial, items, jobs, on_done=_advance(progress))


def convergence_frame(rows: Sequence[ConvergenceRow]) -> pd.DataFrame:
    return pd.DataFrame([{"n": r.n, "seed": r.seed, "statistic": r.statistic} for r in rows])


def convergence_medians(rows: Sequence[ConvergenceRow]) -> pd.DataFrame:
    """Median statistic per sample size"""
    frame = convergence_frame(rows)
    return frame.groupby("n", as_index=False)["statistic"].median()
