"""
Gaussian kernel density export for projected one-dimensional samples
"""

from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ConfigError, DegenerateDataError, DimensionError
from ..samples import SampleSet

SILVERMAN = "silverman"


def silverman_bandwidth(values: np.ndarray) -> float:
    """0.9 min(std, IQR / 1.34) n^(-1/5); falls back to std when the IQR is zero"""
    std = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    spread = min(std, (q75 - q25) / 1.34) if q75 > q25 else std
    return 0.9 * spread * len(values) ** (-0.2)


def kde_export(u: SampleSet, grid_points: int = 512,
               bandwidth: Union[float, str] = SILVERMAN) -> List[Tuple[float, float]]:
    """
    Gaussian KDE of a one-column sample on a uniform grid

    The grid spans [min - 3h, max + 3h] with grid_points nodes.

    Args:
        u: n x 1 sample, n >= 2
        grid_points: Number of grid nodes (>= 2)
        bandwidth: Positive float or SILVERMAN

    Returns:
        List of (t, density) pairs in increasing t

    Raises:
        DimensionError: If u has more than one column
        DegenerateDataError: If u has fewer than two points or zero variance
    """
    if u.d != 1:
        raise DimensionError(f"KDE export needs a one-column sample, got d = {u.d}")
    if u.n < 2:
        raise DegenerateDataError(f"KDE export needs at least two points, got {u.n}")
    if grid_points < 2:
        raise ConfigError(f"grid_points must be >= 2, got {grid_points}")
    values = u.column(0)
    if np.ptp(values) == 0.0:
        raise DegenerateDataError("Sample has zero variance; the density is a point mass")

    if bandwidth == SILVERMAN:
        h = silverman_bandwidth(values)
    else:
        try:
            h = float(bandwidth)
        except (TypeError, ValueError):
            raise ConfigError(f"Bandwidth must be a positive number or '{SILVERMAN}', got {bandwidth!r}")
        if not (np.isfinite(h) and h > 0):
            raise ConfigError(f"Bandwidth must be positive, got {bandwidth}")

    grid = np.linspace(values.min() - 3.0 * h, values.max() + 3.0 * h, int(grid_points))
    z = (grid[:, None] - values[None, :]) / h
    density = np.mean(np.exp(-0.5 * z * z), axis=1) / (h * np.sqrt(2.0 * np.pi))
    return [(float(t), float(f)) for t, f in zip(grid, density)]


def kde_frame(curve: List[Tuple[float, float]]) -> pd.DataFrame:
    """Columns t, density"""
    return pd.DataFrame(curve, columns=["t", "density"])
