"""
ROC / AUC power evaluation
Repeated draws under H0 and H1, empirical ROC over the observed statistics
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import auc, roc_curve

from ...orchestrators.parallel import run_indexed
from ..datasets import DatasetSpec, generate
from ..errors import ConfigError
from ..estimators import BaseStatistic, get_statistic
from ..samples import RngSeed

logger = logging.getLogger(__name__)

MIN_TRIALS = 20

SpecPair = Tuple[DatasetSpec, DatasetSpec]


@dataclass(frozen=True)
class RocCurve:
    """Empirical ROC: (fpr, tpr) points sorted by fpr and the trapezoidal AUC"""

    points: Tuple[Tuple[float, float], ...]
    auc: float
    trials_h0: int
    trials_h1: int
    method: str = "custom"
    statistics_h0: Tuple[float, ...] = ()
    statistics_h1: Tuple[float, ...] = ()
    config: Dict[str, Any] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.points), columns=["fpr", "tpr"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "auc": self.auc,
            "trials_h0": self.trials_h0,
            "trials_h1": self.trials_h1,
            "method": self.method,
            "config": self.config,
        }


def roc_from_statistics(statistics_h0: Sequence[float], statistics_h1: Sequence[float],
                        method: str = "custom", config: Optional[Dict[str, Any]] = None) -> RocCurve:
    """
    Sweep the threshold over every observed value (H1 is the positive class)

    Only the ranking of the statistics matters, so any strictly increasing
    transform of all values leaves the curve unchanged.
    """
    s0 = np.asarray(statistics_h0, dtype=np.float64)
    s1 = np.asarray(statistics_h1, dtype=np.float64)
    if s0.size == 0 or s1.size == 0:
        raise ConfigError("ROC needs at least one statistic under each hypothesis")
    labels = np.concatenate([np.zeros(s0.size), np.ones(s1.size)])
    scores = np.concatenate([s0, s1])
    fpr, tpr, _ = roc_curve(labels, scores, drop_intermediate=False)
    return RocCurve(
        points=tuple((float(f), float(t)) for f, t in zip(fpr, tpr)),
        auc=float(auc(fpr, tpr)),
        trials_h0=int(s0.size),
        trials_h1=int(s1.size),
        method=method,
        statistics_h0=tuple(float(s) for s in s0),
        statistics_h1=tuple(float(s) for s in s1),
        config=config or {},
    )


def _trial_statistic(item) -> float:
    statistic, spec_x, spec_y, n, m, trial_seed = item
    X = generate(spec_x, n, trial_seed.derive("x"))
    Y = generate(spec_y, m, trial_seed.derive("y"))
    return float(statistic(X, Y, trial_seed.derive("statistic")))


def trial_statistics(pair: SpecPair, statistic: BaseStatistic, n: int, m: int, trials: int,
                     seed: RngSeed, jobs: Optional[int] = 1, label: str = "trial",
                     progress: Optional[Callable[[], None]] = None) -> np.ndarray:
    """Statistic values on `trials` fresh draws of the pair; trial i uses seed.derive(f'{label}/{i}')"""
    spec_x, spec_y = pair
    items = [(statistic, spec_x, spec_y, n, m, seed.derive(f"{label}/{i}")) for i in range(trials)]
    on_done = (lambda _: progress()) if progress else None
    return np.asarray(run_indexed(_trial_statistic, items, jobs, on_done=on_done), dtype=np.float64)


def evaluate_roc(spec_h0: SpecPair, spec_h1: SpecPair, method: str = "pw", trials: int = 100,
                 seed: RngSeed = RngSeed(0), n: int = 100, m: Optional[int] = None, method_config=None,
                 jobs: Optional[int] = 1, progress: Optional[Callable[[], None]] = None) -> RocCurve:
    """
    ROC of a statistic separating draws of spec_h0 from draws of spec_h1

    Args:
        spec_h0: (spec for X, spec for Y) under H0
        spec_h1: (spec for X, spec for Y) under H1
        method: 'pw' or 'mmd'
        trials: Draws per hypothesis (>= 20)
        seed: Root stream; every trial and optimizer gets its own substream
        n: Size of X
        m: Size of Y (defaults to n)
        method_config: PwConfig / MmdConfig / dict
        jobs: Worker processes
        progress: Called once per finished trial (2 * trials calls)

    Returns:
        RocCurve

    Raises:
        ConfigError: If trials < 20
    """
    if int(trials) < MIN_TRIALS:
        raise ConfigError(f"ROC evaluation needs trials >= {MIN_TRIALS}, got {trials}")
    m = n if m is None else m
    statistic = get_statistic(method, method_config)

    s0 = trial_statistics(spec_h0, statistic, n, m, int(trials), seed, jobs, label="h0",
                          progress=progress)
    s1 = trial_statistics(spec_h1, statistic, n, m, int(trials), seed, jobs, label="h1",
                          progress=progress)
    curve = roc_from_statistics(s0, s1, method=statistic.name, config={
        **statistic.config_dict(),
        "n": n,
        "m": m,
        "spec_h0": [s.to_dict() for s in spec_h0],
        "spec_h1": [s.to_dict() for s in spec_h1],
    })
    logger.info(f"{statistic.name.upper()} ROC over {trials} trials per class: AUC = {curve.auc:.4f}")
    return curve


def empirical_null_quantile(statistics: Sequence[float], q: float = 0.95) -> float:
    """q-quantile of statistics observed under H0 (linear interpolation)"""
    if not 0.0 <= q <= 1.0:
        raise ConfigError(f"Quantile level must lie in [0, 1], got {q}")
    values = np.asarray(statistics, dtype=np.float64)
    if values.size == 0:
        raise ConfigError("Cannot take a quantile of an empty set of statistics")
    return float(np.quantile(values, q))
