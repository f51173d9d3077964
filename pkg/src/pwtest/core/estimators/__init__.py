"""Two-sample statistics: projected Wasserstein and kernel MMD"""

from .base import BaseStatistic, MmdStatistic, ProjectedWassersteinStatistic
from .mmd import MEDIAN_HEURISTIC, Kernel, MmdConfig, median_heuristic, mmd_biased
from .projected import (
    DanskinGradients,
    PenaltyProbeRow,
    PwConfig,
    PwEstimate,
    c_transform,
    danskin_gradients,
    dual_objective,
    estimate_pw,
    initial_projector,
    penalty_gap_probe,
    projector_step_scale,
    pw_grid_oracle_k1,
)
from ..errors import ConfigError

__all__ = [
    "BaseStatistic",
    "DanskinGradients",
    "Kernel",
    "MEDIAN_HEURISTIC",
    "MmdConfig",
    "MmdStatistic",
    "PenaltyProbeRow",
    "ProjectedWassersteinStatistic",
    "PwConfig",
    "PwEstimate",
    "c_transform",
    "danskin_gradients",
    "dual_objective",
    "estimate_pw",
    "get_statistic",
    "initial_projector",
    "median_heuristic",
    "mmd_biased",
    "penalty_gap_probe",
    "projector_step_scale",
    "pw_grid_oracle_k1",
]

METHODS = ("pw", "mmd")


def get_statistic(method: str, config=None) -> BaseStatistic:
    """
    Factory function to get the statistic for a test method

    Args:
        method: Method name ('pw', 'mmd')
        config: PwConfig / MmdConfig, a plain dict for from_dict, or None for defaults

    Returns:
        Statistic instance

    Raises:
        ConfigError: If the method is not supported
    """
    statistics = {
        "pw": (ProjectedWassersteinStatistic, PwConfig),
        "mmd": (MmdStatistic, MmdConfig),
    }

    method_lower = str(method).lower()

    if method_lower not in statistics:
        raise ConfigError(
            f"Unsupported method: {method}. "
            f"Supported methods: {list(statistics.keys())}"
        )

    statistic_cls, config_cls = statistics[method_lower]
    if isinstance(config, dict):
        config = config_cls.from_dict(config)
    return statistic_cls(config)
