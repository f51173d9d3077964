"""
Synthetic benchmark distributions
Seeded generators for the blob, HDGM, Laplace-shift and Gaussian-variance pairs
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple

import numpy as np

from ..errors import ConfigError
from ..samples import RngSeed, SampleSet

DEFAULT_DELTA = 0.81


class Family(Enum):
    BLOB = "blob"
    HDGM = "hdgm"
    LAPLACE_SHIFT = "laplace-shift"
    GAUSS_VAR = "gauss-var"


class Role(Enum):
    MU = "mu"
    NU = "nu"


def _parse_enum(enum_cls, value, label: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).lower().replace("_", "-") if enum_cls is Family else str(value).lower())
    except ValueError:
        raise ConfigError(f"Unknown {label} '{value}'. Supported: {[e.value for e in enum_cls]}")


@dataclass(frozen=True)
class DatasetSpec:
    """
    One side of a benchmark pair

    delta is the off-diagonal correlation of the blob / HDGM alternative,
    shift the first-coordinate location shift of the Laplace alternative,
    variance the last-coordinate variance under the Gaussian-variance null
    side and separation the HDGM mixture offset (means 0 and separation * 1_d).
    """

    family: Family
    role: Role
    d: int
    delta: float = DEFAULT_DELTA
    shift: float = 1.0
    variance: float = 4.0
    separation: float = 5.0

    def __post_init__(self):
        object.__setattr__(self, "family", _parse_enum(Family, self.family, "dataset family"))
        object.__setattr__(self, "role", _parse_enum(Role, self.role, "role"))
        object.__setattr__(self, "d", int(self.d))
        if self.family is Family.BLOB and self.d != 2:
            raise ConfigError(f"Family 'blob' requires d = 2, got d = {self.d}")
        if self.family is Family.HDGM and self.d < 2:
            raise ConfigError(f"Family 'hdgm' requires d >= 2, got d = {self.d}")
        if self.d < 1:
            raise ConfigError(f"Dimension d must be >= 1, got {self.d}")
        if not -1.0 < self.delta < 1.0:
            raise ConfigError(f"Correlation delta must lie in (-1, 1), got {self.delta}")
        if not self.variance > 0:
            raise ConfigError(f"Variance must be positive, got {self.variance}")

    @classmethod
    def from_name(cls, name: str, role: str = "mu", d: int = 2, delta: float = DEFAULT_DELTA) -> "DatasetSpec":
        """Map CLI names (blob, hdgm, laplace-shift, gauss-var) to a spec"""
        return cls(family=name, role=role, d=d, delta=delta)

    def with_role(self, role) -> "DatasetSpec":
        return replace(self, role=_parse_enum(Role, role, "role"))

    @property
    def name(self) -> str:
        return f"{self.family.value}/{self.role.value}"

    def to_dict(self):
        return {
            "family": self.family.value,
            "role": self.role.value,
            "d": self.d,
            "delta": self.delta,
            "shift": self.shift,
            "variance": self.variance,
            "separation": self.separation,
        }


def h0_pair(spec: DatasetSpec) -> Tuple[DatasetSpec, DatasetSpec]:
    """(mu, mu): both samples from the null distribution"""
    mu = spec.with_role(Role.MU)
    return mu, mu


def h1_pair(spec: DatasetSpec) -> Tuple[DatasetSpec, DatasetSpec]:
    """(mu, nu): the benchmark alternative"""
    return spec.with_role(Role.MU), spec.with_role(Role.NU)


def _correlated_block(delta: float) -> np.ndarray:
    """Lower Cholesky factor of [[1, delta], [delta, 1]]"""
    return np.array([[1.0, 0.0], [delta, np.sqrt(1.0 - delta * delta)]])


def _blob(spec: DatasetSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, 2))
    if spec.role is Role.NU:
        Z = Z @ _correlated_block(spec.delta).T
    return Z


def _hdgm(spec: DatasetSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    component = rng.integers(0, 2, size=n)
    Z = rng.standard_normal((n, spec.d))
    if spec.role is Role.NU:
        Z[:, :2] = Z[:, :2] @ _correlated_block(spec.delta).T
    return Z + spec.separation * component[:, None].astype(np.float64)


def _laplace_shift(spec: DatasetSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.laplace(0.0, 1.0, size=(n, spec.d))
    if spec.role is Role.NU:
        Z[:, 0] += spec.shift
    return Z


def _gauss_var(spec: DatasetSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, spec.d))
    if spec.role is Role.MU:
        Z[:, -1] *= np.sqrt(spec.variance)
    return Z


_GENERATORS = {
    Family.BLOB: _blob,
    Family.HDGM: _hdgm,
    Family.LAPLACE_SHIFT: _laplace_shift,
    Family.GAUSS_VAR: _gauss_var,
}


def generate(spec: DatasetSpec, n: int, seed: RngSeed) -> SampleSet:
    """
    Draw n i.i.d. points from one side of a benchmark pair

    MU and NU draws use distinct substreams of seed, so a (mu, nu) pair
    generated from one seed is independent.

    Args:
        spec: Family, role and dimension
        n: Number of points (>= 1)
        seed: Random stream

    Returns:
        n x d SampleSet

    Raises:
        ConfigError: If n < 1 or the dataset description is invalid
    """
    if not isinstance(spec, DatasetSpec):
        raise ConfigError(f"Expected a DatasetSpec, got {type(spec).__name__}")
    if int(n) < 1:
        raise ConfigError(f"Sample size n must be >= 1, got {n}")
    rng = seed.derive(f"dataset/{spec.name}").generator()
    return SampleSet(_GENERATORS[spec.family](spec, int(n), rng))
