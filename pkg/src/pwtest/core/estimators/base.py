"""
Base class for two-sample statistics
Defines the interface the test harness uses to evaluate a statistic on a pair of samples
"""

from abc import ABC, abstractmethod
from dataclasses import replace
from typing import Any, Dict, Optional

from ..samples import RngSeed, SampleSet
from .mmd import MmdConfig, mmd_biased
from .projected import PwConfig, estimate_pw


class BaseStatistic(ABC):
    """
    Abstract base class for a statistic T(X, Y)

    Implementations must be picklable (they are shipped to worker
    processes) and deterministic given the seed passed to compute().
    """

    name: str = "base"

    @abstractmethod
    def compute(self, X: SampleSet, Y: SampleSet, seed: RngSeed) -> float:
        """
        Evaluate the statistic

        Args:
            X: n x d sample
            Y: m x d sample
            seed: Random stream for any internal randomness

        Returns:
            Non-negative statistic value
        """
        pass

    def __call__(self, X: SampleSet, Y: SampleSet, seed: RngSeed) -> float:
        return self.compute(X, Y, seed)

    @abstractmethod
    def config_dict(self) -> Dict[str, Any]:
        """Resolved configuration, echoed into result documents"""
        pass

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.config_dict()})"


class ProjectedWassersteinStatistic(BaseStatistic):
    """Runs the SGD estimator with a fresh optimizer seeded by the call's seed"""

    name = "pw"

    def __init__(self, config: Optional[PwConfig] = None):
        self.config = config or PwConfig()

    def compute(self, X: SampleSet, Y: SampleSet, seed: RngSeed) -> float:
        return estimate_pw(X, Y, replace(self.config, seed=seed)).value

    def config_dict(self) -> Dict[str, Any]:
        payload = self.config.to_dict()
        payload.pop("seed")
        return payload


class MmdStatistic(BaseStatistic):
    """Biased MMD; the median-heuristic bandwidth is resolved on every call"""

    name = "mmd"

    def __init__(self, config: Optional[MmdConfig] = None):
        self.config = config or MmdConfig()

    def compute(self, X: SampleSet, Y: SampleSet, seed: RngSeed) -> float:
        return mmd_biased(X, Y, self.config, seed=seed)

    def config_dict(self) -> Dict[str, Any]:
        return self.config.to_dict()
