"""
Exact 1-Wasserstein distances between uniform empirical measures
Closed-form 1-D transport and brute-force oracles for tiny instances
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from ..errors import DimensionError, EmptyInputError, SizeLimitError
from ..samples import GroundMetric, SampleSet

# Brute-force limits for the exact oracle
MAX_PERMUTATION_SIZE = 8
MAX_POLYTOPE_CELLS = 64

Pairing = List[Tuple[int, int, float]]


@dataclass(frozen=True)
class TransportResult:
    """
    Optimal transport cost with an optional optimal plan

    pairing holds (source index, target index, mass) triples; masses of
    each source sum to 1/n and masses of each target sum to 1/m.
    """

    cost: float
    pairing: Optional[Pairing] = None

    def plan_matrix(self, n: int, m: int) -> np.ndarray:
        """Dense n x m coupling built from the pairing"""
        if self.pairing is None:
            raise ValueError("No pairing was computed for this result")
        plan = np.zeros((n, m))
        for i, j, mass in self.pairing:
            plan[i, j] += mass
        return plan

    def plan_cost(self, X: SampleSet, Y: SampleSet, metric: GroundMetric = GroundMetric.EUCLIDEAN) -> float:
        """Total sum of mass * distance over the pairing"""
        if self.pairing is None:
            raise ValueError("No pairing was computed for this result")
        return float(sum(mass * metric.distance(X.data[i], Y.data[j]) for i, j, mass in self.pairing))


def _as_line(values) -> np.ndarray:
    """Flatten a one-column SampleSet (or array-like) into a 1-D array"""
    if isinstance(values, SampleSet):
        if values.d != 1:
            raise DimensionError(f"1-D transport needs one-dimensional samples, got d = {values.d}")
        return values.column(0)
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise EmptyInputError("Cannot transport an empty sample")
    if array.ndim == 2:
        if array.shape[1] != 1:
            raise DimensionError(f"1-D transport needs one-dimensional samples, got shape {array.shape}")
        array = array[:, 0]
    return array.ravel()


def _quantile_pairing(order_u: np.ndarray, order_v: np.ndarray) -> Pairing:
    """North-west corner coupling of two sorted uniform measures"""
    n, m = len(order_u), len(order_v)
    pairing = []
    i = j = 0
    left_u, left_v = 1.0 / n, 1.0 / m
    while i < n and j < m:
        mass = min(left_u, left_v)
        pairing.append((int(order_u[i]), int(order_v[j]), mass))
        left_u -= mass
        left_v -= mass
        # advance whichever side is exhausted; a tie advances both
        if left_u <= 1e-15:
            i += 1
            left_u = 1.0 / n
        if left_v <= 1e-15:
            j += 1
            left_v = 1.0 / m
    return pairing


def w1_1d(u, v, return_plan: bool = False) -> TransportResult:
    """
    Exact 1-Wasserstein distance between two 1-D uniform empirical measures

    For n = m this is the mean absolute difference of the order statistics;
    otherwise the integral of |F_u - F_v| is summed exactly over the merged
    breakpoints.

    Args:
        u: one-column SampleSet (or 1-D array) with n >= 1 points
        v: one-column SampleSet (or 1-D array) with m >= 1 points
        return_plan: Also return the quantile coupling as a pairing

    Returns:
        TransportResult with the W1 cost

    Raises:
        EmptyInputError: If either side is empty
        DimensionError: If either side has more than one column
    """
    u = _as_line(u)
    v = _as_line(v)
    order_u = np.argsort(u, kind="stable")
    order_v = np.argsort(v, kind="stable")
    su, sv = u[order_u], v[order_v]

    if len(su) == len(sv):
        cost = float(np.mean(np.abs(su - sv)))
    else:
        merged = np.sort(np.concatenate([su, sv]), kind="stable")
        widths = np.diff(merged)
        cdf_u = np.searchsorted(su, merged[:-1], side="right") / len(su)
        cdf_v = np.searchsorted(sv, merged[:-1], side="right") / len(sv)
        cost = float(np.sum(np.abs(cdf_u - cdf_v) * widths))

    pairing = _quantile_pairing(order_u, order_v) if return_plan else None
    return TransportResult(cost=cost, pairing=pairing)


def _permutation_oracle(C: np.ndarray) -> TransportResult:
    n = C.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    totals = C[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))
    pairing = [(i, int(perms[best, i]), 1.0 / n) for i in range(n)]
    return TransportResult(cost=float(totals[best] / n), pairing=pairing)


def _polytope_oracle(C: np.ndarray) -> TransportResult:
    n, m = C.shape
    # row-sum and column-sum constraints on the vectorized plan
    rows = np.kron(np.eye(n), np.ones((1, m)))
    cols = np.kron(np.ones((1, n)), np.eye(m))
    A_eq = np.vstack([rows, cols])
    b_eq = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    result = linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if not result.success:
        raise RuntimeError(f"Transport LP failed: {result.message}")
    plan = result.x.reshape(n, m)
    pairing = [(int(i), int(j), float(plan[i, j])) for i, j in zip(*np.nonzero(plan > 1e-15))]
    return TransportResult(cost=float(C.ravel() @ result.x), pairing=pairing)


def w1_exact_small(X: SampleSet, Y: SampleSet, metric: GroundMetric = GroundMetric.EUCLIDEAN) -> TransportResult:
    """
    Exact W1 between two small uniform empirical measures in any dimension

    Equal sizes are solved by enumerating every permutation (n <= 8);
    unequal sizes with n * m <= 64 by a dual-simplex solve of the
    transport LP, whose optimum is a vertex of the transport polytope.

    Raises:
        SizeLimitError: If the instance is beyond both brute-force limits
        DimensionError: If X and Y have different dimensions
    """
    if X.d != Y.d:
        raise DimensionError(f"Cannot transport between dimensions {X.d} and {Y.d}")
    n, m = X.n, Y.n
    C = metric.pairwise(X, Y)

    if n == m and n <= MAX_PERMUTATION_SIZE:
        return _permutation_oracle(C)
    if n != m and n * m <= MAX_POLYTOPE_CELLS:
        return _polytope_oracle(C)
    raise SizeLimitError(
        f"Exact oracle supports n = m <= {MAX_PERMUTATION_SIZE} or n * m <= {MAX_POLYTOPE_CELLS}, "
        f"got n = {n}, m = {m}"
    )
