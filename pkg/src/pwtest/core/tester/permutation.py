"""
Permutation test
Monte-Carlo null distribution of a statistic under random relabelings of the pooled sample
"""

import logging
from typing import Callable, Optional

import numpy as np

from ...orchestrators.parallel import run_indexed
from ..errors import ConfigError, DimensionError
from ..samples import RngSeed, SampleSet

logger = logging.getLogger(__name__)

MIN_PERMUTATIONS = 19
DEFAULT_PERMUTATIONS = 199


def _permuted_statistic(item) -> float:
    statistic_fn, pooled, n, split_seed, statistic_seed = item
    order = split_seed.generator().permutation(pooled.shape[0])
    return float(statistic_fn(SampleSet(pooled[order[:n]]), SampleSet(pooled[order[n:]]), statistic_seed))


def canonical_pool(X: SampleSet, Y: SampleSet) -> np.ndarray:
    """Pooled rows in lexicographic order, independent of how X and Y were ordered"""
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    pooled = np.vstack([X.data, Y.data])
    return pooled[np.lexsort(pooled.T[::-1])]


def permutation_null(X: SampleSet, Y: SampleSet, statistic_fn: Callable, P: int = DEFAULT_PERMUTATIONS,
                     seed: RngSeed = RngSeed(0), jobs: Optional[int] = 1) -> np.ndarray:
    """
    Statistic values on P seeded random splits of the pooled sample into sizes (n, m)

    Split i is drawn from seed.derive(i) over the canonical pooled order;
    every split is evaluated with the same statistic seed.

    Raises:
        ConfigError: If P < 19
    """
    if int(P) < MIN_PERMUTATIONS:
        raise ConfigError(f"Permutation count must be >= {MIN_PERMUTATIONS}, got {P}")
    pooled = canonical_pool(X, Y)
    statistic_seed = seed.derive("statistic")
    items = [(statistic_fn, pooled, X.n, seed.derive(i), statistic_seed) for i in range(int(P))]
    return np.asarray(run_indexed(_permuted_statistic, items, jobs), dtype=np.float64)


def pvalue_from_null(observed: float, null: np.ndarray) -> float:
    """(1 + #{null >= observed}) / (P + 1); ties count as exceeding"""
    null = np.asarray(null, dtype=np.float64)
    return float((1 + np.count_nonzero(null >= observed)) / (null.size + 1))


def permutation_pvalue(X: SampleSet, Y: SampleSet, statistic_fn: Callable, P: int = DEFAULT_PERMUTATIONS,
                       seed: RngSeed = RngSeed(0), jobs: Optional[int] = 1,
                       observed: Optional[float] = None) -> float:
    """
    Permutation p-value of statistic_fn(X, Y, seed)

    Args:
        X: n x d sample
        Y: m x d sample
        statistic_fn: Callable (X, Y, RngSeed) -> float, picklable when jobs > 1
        P: Number of random splits (>= 19)
        seed: Stream for the splits and the statistic
        jobs: Worker processes for the permuted statistics
        observed: Precomputed observed statistic (must use seed.derive("statistic"))

    Returns:
        p-value in (0, 1]
    """
    if observed is None:
        observed = float(statistic_fn(X, Y, seed.derive("statistic")))
    null = permutation_null(X, Y, statistic_fn, P, seed, jobs)
    p_value = pvalue_from_null(observed, null)
    logger.debug(f"Permutation test: observed={observed:.6g}, P={len(null)}, p={p_value:.4f}")
    return p_value
