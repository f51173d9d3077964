"""
Shared data model for pwtest
Sample sets, projection matrices, the ground metric and seeded randomness
"""

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DegenerateDataError, DimensionError, EmptyInputError, RankError


def _frozen_array(values, ndim: int = 2) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    if array.ndim == 1 and ndim == 2:
        array = array.reshape(-1, 1)
    if array.ndim != ndim:
        raise DimensionError(f"Expected a {ndim}-D array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    Uniform empirical measure over the rows of an n x d matrix

    Each row is one observation and carries weight 1/n. A 1-D input is
    read as a single column (n observations of a scalar).
    """

    data: np.ndarray

    def __post_init__(self):
        array = _frozen_array(self.data)
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise EmptyInputError(f"Sample set must have n >= 1 and d >= 1, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise DegenerateDataError("Sample set contains NaN or infinite entries")
        object.__setattr__(self, "data", array)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return self.n

    def rows(self, index) -> "SampleSet":
        """Sub-sample by row index (array, list or slice)"""
        return SampleSet(self.data[index])

    def column(self, j: int = 0) -> np.ndarray:
        return self.data[:, j]

    def second_moment(self) -> float:
        """Sample mean of squared row norms"""
        return float(np.mean(np.sum(self.data ** 2, axis=1)))

    def __add__(self, other: "SampleSet") -> "SampleSet":
        return SampleSet(self.data + _as_array(other))

    def __mul__(self, scalar: float) -> "SampleSet":
        return SampleSet(self.data * float(scalar))

    __rmul__ = __mul__


def _as_array(values) -> np.ndarray:
    return values.data if isinstance(values, SampleSet) else np.asarray(values, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class ProjectionMatrix:
    """
    A d x k matrix A meant to satisfy A^T A = I_k

    The constraint is not enforced on construction: the penalty method
    produces matrices that are only approximately orthonormal, and the
    defect is reported rather than corrected.
    """

    entries: np.ndarray

    def __post_init__(self):
        array = _frozen_array(self.entries)
        d, k = array.shape
        if k < 1 or d < 1 or k > d:
            raise DimensionError(f"Projection matrix must be d x k with 1 <= k <= d, got {array.shape}")
        if not np.all(np.isfinite(array)):
            raise DegenerateDataError("Projection matrix contains NaN or infinite entries")
        object.__setattr__(self, "entries", array)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    def defect(self) -> float:
        return orthogonality_defect(self)

    def is_orthonormal(self, tol: float = 1e-6) -> bool:
        return self.defect() <= tol

    def direction(self) -> np.ndarray:
        """The single column of a k = 1 projector as a flat vector"""
        if self.k != 1:
            raise DimensionError(f"direction() needs k = 1, projector has k = {self.k}")
        return self.entries[:, 0].copy()

    @classmethod
    def identity(cls, d: int) -> "ProjectionMatrix":
        return cls(np.eye(d))


class GroundMetric(Enum):
    """Ground cost c(x, y) between points; only the l2 distance is supported"""

    EUCLIDEAN = "euclidean"

    def distance(self, x, y) -> float:
        diff = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
        return float(np.sqrt(np.sum(diff * diff)))

    def pairwise(self, U, V) -> np.ndarray:
        """Cost matrix between the rows of U and the rows of V"""
        U = np.atleast_2d(_as_array(U))
        V = np.atleast_2d(_as_array(V))
        if U.shape[1] != V.shape[1]:
            raise DimensionError(f"Cannot compare points of dimension {U.shape[1]} and {V.shape[1]}")
        return cdist(U, V, metric=self.value)


_UINT64 = 2 ** 64


@dataclass(frozen=True)
class RngSeed:
    """
    Reproducible random stream identified by (seed, stream_id)

    Identical pairs produce identical sequences. derive() hands out
    independent substreams for parallel trials and named sub-tasks.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not (0 <= int(value) < _UINT64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value}")
            object.__setattr__(self, name, int(value))

    def derive(self, key: Union[int, str]) -> "RngSeed":
        digest = hashlib.blake2b(f"{self.stream_id}/{key}".encode("utf-8"), digest_size=8).digest()
        return RngSeed(self.seed, int.from_bytes(digest, "little"))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(sequence)


def project(A: ProjectionMatrix, X: SampleSet) -> SampleSet:
    """
    Push samples through the linear map z -> A^T z

    Args:
        A: d x k projection matrix
        X: n x d sample set

    Returns:
        n x k sample set whose i-th row is A^T x_i

    Raises:
        DimensionError: If A has a different number of rows than X has columns
    """
    if A.d != X.d:
        raise DimensionError(f"Projection expects d = {A.d} features, samples have {X.d}")
    return SampleSet(X.data @ A.entries)


def canonical_signs(M: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each column is positive"""
    M = np.array(M, dtype=np.float64, copy=True)
    pivots = np.argmax(np.abs(M), axis=0)
    signs = np.sign(M[pivots, np.arange(M.shape[1])])
    signs[signs == 0] = 1.0
    return M * signs


def orthonormalize(M) -> ProjectionMatrix:
    """
    Orthonormal basis for the column space of M, via reduced QR

    Raises:
        RankError: If M does not have full column rank
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.shape[0] < M.shape[1]:
        raise RankError(f"A {M.shape[0]} x {M.shape[1]} matrix cannot have full column rank")
    if not np.all(np.isfinite(M)) or np.linalg.matrix_rank(M) < M.shape[1]:
        raise RankError(f"Matrix of shape {M.shape} is rank deficient")
    Q, _ = np.linalg.qr(M, mode="reduced")
    return ProjectionMatrix(canonical_signs(Q))


def orthogonality_defect(A: ProjectionMatrix) -> float:
    """Frobenius norm of A^T A - I_k"""
    entries = A.entries if isinstance(A, ProjectionMatrix) else np.atleast_2d(np.asarray(A, dtype=np.float64))
    gram = entries.T @ entries
    return float(np.linalg.norm(gram - np.eye(gram.shape[0]), ord="fro"))


def random_projection(d: int, k: int, seed: RngSeed) -> ProjectionMatrix:
    """Orthonormalized standard Gaussian d x k matrix"""
    return orthonormalize(seed.generator().standard_normal((d, k)))
