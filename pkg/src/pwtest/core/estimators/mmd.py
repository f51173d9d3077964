"""
Kernel maximum mean discrepancy baseline
Biased (V-statistic) MMD with a Gaussian kernel and median-heuristic bandwidth
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial.distance import cdist, pdist

from ..errors import ConfigError, DegenerateDataError, DimensionError
from ..samples import RngSeed, SampleSet

MEDIAN_HEURISTIC = "median"

# Largest pooled sample for the exact O(N^2) median heuristic
MEDIAN_EXACT_LIMIT = 4096


class Kernel(Enum):
    GAUSSIAN = "gaussian"

    def gram(self, U: np.ndarray, V: np.ndarray, bandwidth: float) -> np.ndarray:
        """k(u, v) = exp(-||u - v||^2 / (2 sigma^2))"""
        return np.exp(-cdist(U, V, metric="sqeuclidean") / (2.0 * bandwidth ** 2))

    @property
    def bound(self) -> float:
        """sup k(x, y)"""
        return 1.0


@dataclass(frozen=True)
class MmdConfig:
    """bandwidth is a positive float or the MEDIAN_HEURISTIC sentinel"""

    bandwidth: Any = MEDIAN_HEURISTIC
    kernel: Kernel = Kernel.GAUSSIAN

    def __post_init__(self):
        if isinstance(self.kernel, str):
            try:
                object.__setattr__(self, "kernel", Kernel(self.kernel.lower()))
            except ValueError:
                raise ConfigError(f"Unknown kernel '{self.kernel}'. Supported: {[k.value for k in Kernel]}")
        if self.bandwidth is None:
            object.__setattr__(self, "bandwidth", MEDIAN_HEURISTIC)
        if self.bandwidth != MEDIAN_HEURISTIC:
            try:
                bandwidth = float(self.bandwidth)
            except (TypeError, ValueError):
                raise ConfigError(f"Bandwidth must be a positive number or '{MEDIAN_HEURISTIC}', got {self.bandwidth!r}")
            if not (np.isfinite(bandwidth) and bandwidth > 0):
                raise ConfigError(f"Bandwidth must be positive, got {self.bandwidth}")
            object.__setattr__(self, "bandwidth", bandwidth)

    def resolve_bandwidth(self, X: SampleSet, Y: SampleSet, seed: Optional[RngSeed] = None) -> float:
        if self.bandwidth == MEDIAN_HEURISTIC:
            return median_heuristic(X, Y, seed=seed)
        return self.bandwidth

    def to_dict(self) -> Dict[str, Any]:
        return {"bandwidth": self.bandwidth, "kernel": self.kernel.value}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "MmdConfig":
        unknown = set(payload) - {"bandwidth", "kernel"}
        if unknown:
            raise ConfigError(f"Unknown mmd configuration keys: {sorted(unknown)}")
        return cls(**payload)


def median_heuristic(X: SampleSet, Y: SampleSet, seed: Optional[RngSeed] = None) -> float:
    """
    Median of the nonzero pairwise l2 distances in the pooled sample

    Pools above MEDIAN_EXACT_LIMIT points are subsampled without
    replacement from a seeded stream.

    Raises:
        DegenerateDataError: If every pooled point is identical
    """
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    pooled = np.vstack([X.data, Y.data])
    if pooled.shape[0] < 2:
        raise DegenerateDataError("Median heuristic needs at least two pooled points")
    if pooled.shape[0] > MEDIAN_EXACT_LIMIT:
        pooled = pooled[np.lexsort(pooled.T[::-1])]
        rng = (seed or RngSeed(0)).derive("median-heuristic").generator()
        pooled = pooled[rng.choice(pooled.shape[0], size=MEDIAN_EXACT_LIMIT, replace=False)]
    distances = pdist(pooled)
    distances = distances[distances > 0]
    if distances.size == 0:
        raise DegenerateDataError("All pooled points are identical; the bandwidth would be zero")
    return float(np.median(distances))


def mmd_biased(X: SampleSet, Y: SampleSet, cfg: MmdConfig = MmdConfig(), seed: Optional[RngSeed] = None) -> float:
    """
    Biased MMD estimate MMD_b = sqrt(max(0, MMD_b^2))

    MMD_b^2 = mean k(x, x') + mean k(y, y') - 2 mean k(x, y)

    Args:
        X: n x d sample
        Y: m x d sample
        cfg: Kernel and bandwidth settings
        seed: Stream for subsampling in the median heuristic (large pools only)

    Returns:
        Statistic in [0, sqrt(2K)], symmetric in (X, Y)
    """
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    sigma = cfg.resolve_bandwidth(X, Y, seed)
    within = np.mean(cfg.kernel.gram(X.data, X.data, sigma)) + np.mean(cfg.kernel.gram(Y.data, Y.data, sigma))
    K_xy = cfg.kernel.gram(X.data, Y.data, sigma)
    # bit-for-bit symmetric under swapping X and Y
    cross = 0.5 * (np.mean(K_xy) + np.mean(np.ascontiguousarray(K_xy.T)))
    return float(np.sqrt(max(0.0, within - 2.0 * cross)))
