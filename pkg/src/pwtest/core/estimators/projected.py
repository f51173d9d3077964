"""
Projected Wasserstein estimator
c-transform dual objective, Danskin gradients, and the penalized SGD loop
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import ConfigError, DimensionError, DivergenceError, SizeLimitError
from ..potentials import PotentialNetwork, forward_batch, init_network, weighted_gradients
from ..samples import (
    GroundMetric,
    ProjectionMatrix,
    RngSeed,
    SampleSet,
    canonical_signs,
    orthogonality_defect,
    orthonormalize,
    project,
    random_projection,
)
from ..transport import w1_1d

logger = logging.getLogger(__name__)

LR_SCHEDULES = ("constant", "inverse-sqrt")
INIT_SCHEMES = ("coordinate", "random")

# Rows of X evaluated per block when forming full cost matrices
_CHUNK_ROWS = 1024


@dataclass(frozen=True)
class PwConfig:
    """
    Optimizer settings for the penalized projected Wasserstein problem

    batch_size is clamped to min(n, m) at run time; batches are drawn with
    replacement from the empirical measures. learning_rate = 0 freezes
    all parameters. init picks the starting projector, see initial_projector.
    """

    k: int = 1
    penalty: float = 10.0
    batch_size: int = 64
    iterations: int = 1000
    learning_rate: float = 0.05
    lr_schedule: str = "inverse-sqrt"
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))
    reorthonormalize_every: int = 0
    init: str = "coordinate"
    hidden: Tuple[int, ...] = (32, 32)
    activation: str = "relu"
    full_scan_limit: int = 4096
    log_every: int = 100

    def __post_init__(self):
        if isinstance(self.seed, int):
            object.__setattr__(self, "seed", RngSeed(self.seed))
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if self.k < 1:
            raise ConfigError(f"Projection dimension k must be >= 1, got {self.k}")
        if not self.penalty > 0:
            raise ConfigError(f"Penalty lambda must be positive, got {self.penalty}")
        if self.batch_size < 1:
            raise ConfigError(f"Batch size must be >= 1, got {self.batch_size}")
        if self.iterations < 1:
            raise ConfigError(f"Iterations must be >= 1, got {self.iterations}")
        if not self.learning_rate >= 0:
            raise ConfigError(f"Learning rate must be non-negative, got {self.learning_rate}")
        if self.lr_schedule not in LR_SCHEDULES:
            raise ConfigError(f"Unknown learning-rate schedule '{self.lr_schedule}'. Supported: {list(LR_SCHEDULES)}")
        if self.reorthonormalize_every < 0:
            raise ConfigError("reorthonormalize_every must be >= 0")
        if self.init not in INIT_SCHEMES:
            raise ConfigError(f"Unknown projector initialization '{self.init}'. Supported: {list(INIT_SCHEMES)}")
        if any(h < 1 for h in self.hidden):
            raise ConfigError(f"Hidden layer sizes must be >= 1, got {list(self.hidden)}")

    def step_size(self, t: int) -> float:
        if self.lr_schedule == "constant":
            return self.learning_rate
        return self.learning_rate / np.sqrt(t)

    def layer_dims(self) -> List[int]:
        return [self.k, *self.hidden, 1]

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["seed"] = {"seed": self.seed.seed, "stream_id": self.seed.stream_id}
        payload["hidden"] = list(self.hidden)
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "PwConfig":
        payload = dict(payload)
        seed = payload.pop("seed", 0)
        if isinstance(seed, dict):
            seed = RngSeed(seed.get("seed", 0), seed.get("stream_id", 0))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"Unknown pw configuration keys: {sorted(unknown)}")
        return cls(seed=seed, **payload)


@dataclass(frozen=True, eq=False)
class PwEstimate:
    """Result of one run of the SGD estimator"""

    value: float
    projector: ProjectionMatrix
    network: PotentialNetwork
    trace: Tuple[float, ...]
    defect: float
    defect_trace: Tuple[float, ...] = ()
    raw_projector: Optional[ProjectionMatrix] = None
    config: Optional[PwConfig] = None

    def trace_frame(self) -> pd.DataFrame:
        """Training trace with columns iteration, objective, defect"""
        return pd.DataFrame({
            "iteration": np.arange(1, len(self.trace) + 1),
            "objective": np.asarray(self.trace, dtype=np.float64),
            "defect": np.asarray(self.defect_trace, dtype=np.float64),
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "defect": self.defect,
            "projector": self.projector.entries.tolist(),
            "raw_projector": None if self.raw_projector is None else self.raw_projector.entries.tolist(),
            "network": self.network.to_dict(),
            "config": None if self.config is None else self.config.to_dict(),
        }


@dataclass(frozen=True)
class DanskinGradients:
    """Per-pair stochastic gradients; degenerate marks a zero-distance nearest pair"""

    grad_A: np.ndarray
    grad_theta: np.ndarray
    j_star: int
    degenerate: bool = False


@dataclass(frozen=True)
class PenaltyProbeRow:
    penalty: float
    value: float
    defect: float


def _check_conform(A: ProjectionMatrix, *sample_sets: SampleSet):
    for X in sample_sets:
        if X.d != A.d:
            raise DimensionError(f"Projection expects d = {A.d} features, samples have {X.d}")


def _scores(zx: np.ndarray, zy: np.ndarray, psi_y: np.ndarray, metric: GroundMetric) -> np.ndarray:
    """c(z_x, z_y_j) - psi(z_y_j) for every pair"""
    return metric.pairwise(zx, zy) - psi_y[None, :]


def c_transform(net: PotentialNetwork, A: ProjectionMatrix, x, Y: SampleSet,
                metric: GroundMetric = GroundMetric.EUCLIDEAN) -> Tuple[float, int]:
    """
    psi^c(A^T x) = min_j c(A^T x, A^T y_j) - psi(A^T y_j)

    Returns:
        (minimum value, smallest minimizing index j*)
    """
    _check_conform(A, Y)
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != A.d:
        raise DimensionError(f"Point has {x.size} coordinates, projection expects {A.d}")
    zy = Y.data @ A.entries
    scores = _scores((x @ A.entries)[None, :], zy, forward_batch(net, zy), metric)[0]
    j_star = int(np.argmin(scores))
    return float(scores[j_star]), j_star


def dual_objective(net: PotentialNetwork, A: ProjectionMatrix, X: SampleSet, Y: SampleSet,
                   metric: GroundMetric = GroundMetric.EUCLIDEAN) -> float:
    """
    Full-sample dual value (1/n) sum psi^c(A^T x_i) + (1/m) sum psi(A^T y_j)

    For orthonormal A this never exceeds W1 between the projected samples.
    """
    _check_conform(A, X, Y)
    zy = Y.data @ A.entries
    psi_y = forward_batch(net, zy)
    total = 0.0
    for start in range(0, X.n, _CHUNK_ROWS):
        zx = X.data[start:start + _CHUNK_ROWS] @ A.entries
        total += float(np.sum(np.min(_scores(zx, zy, psi_y, metric), axis=1)))
    return total / X.n + float(np.mean(psi_y))


def _batch_gradients(net: PotentialNetwork, A: np.ndarray, xb: np.ndarray, y0: np.ndarray,
                     y_star: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Batch-averaged Danskin gradients with the argmins frozen

    Returns:
        (grad_A, grad_theta, number of zero-distance pairs)
    """
    B = xb.shape[0]
    diff = xb - y_star
    r = diff @ A
    norms = np.linalg.norm(r, axis=1)
    degenerate = norms <= 0.0
    unit = np.zeros_like(r)
    unit[~degenerate] = r[~degenerate] / norms[~degenerate, None]
    grad_A = diff.T @ unit / B

    Z = np.vstack([y0 @ A, y_star @ A])
    w = np.concatenate([np.full(B, 1.0 / B), np.full(B, -1.0 / B)])
    grad_theta, input_grads = weighted_gradients(net, Z, w)
    grad_A = grad_A + np.vstack([y0, y_star]).T @ input_grads
    return grad_A, grad_theta, int(np.count_nonzero(degenerate))


def danskin_gradients(net: PotentialNetwork, A: ProjectionMatrix, x, y, Y: SampleSet,
                      metric: GroundMetric = GroundMetric.EUCLIDEAN) -> DanskinGradients:
    """
    Stochastic gradients of J(x, y) = psi^c(A^T x) + psi(A^T y) in A and theta

    j* comes from c_transform at x. When A^T x coincides with A^T y_j*, the
    cost term contributes zero and the result is flagged degenerate.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.size != A.d:
        raise DimensionError(f"Point has {y.size} coordinates, projection expects {A.d}")
    _, j_star = c_transform(net, A, x, Y, metric)
    grad_A, grad_theta, degenerate = _batch_gradients(
        net, A.entries, x[None, :], y[None, :], Y.data[j_star][None, :]
    )
    return DanskinGradients(grad_A=grad_A, grad_theta=grad_theta, j_star=j_star, degenerate=degenerate > 0)


def initial_projector(X: SampleSet, Y: SampleSet, cfg: PwConfig) -> ProjectionMatrix:
    """
    Starting projector of estimate_pw

    "coordinate" stacks the k coordinate axes whose marginals are furthest
    apart in exact 1-D W1 (ties go to the lower index). "random"
    orthonormalizes a seeded Gaussian d x k matrix.

    Raises:
        DimensionError: If X and Y have different dimensions or k > d
    """
    if X.d != Y.d or cfg.k > X.d:
        raise DimensionError(f"Cannot start a d x k = {X.d} x {cfg.k} projector for samples of dimension {X.d} and {Y.d}")
    if cfg.init == "random":
        return random_projection(X.d, cfg.k, cfg.seed.derive("pw-projector"))
    with np.errstate(over="ignore", invalid="ignore"):
        marginal_w1 = _w1_per_direction(X.data, Y.data)
    axes = np.argsort(-marginal_w1, kind="stable")[:cfg.k]
    A = np.zeros((X.d, cfg.k))
    A[axes, np.arange(cfg.k)] = 1.0
    return ProjectionMatrix(A)


def projector_step_scale(X: SampleSet, Y: SampleSet) -> float:
    """
    sqrt(d * total variance) of the pooled sample

    Divides the cost gradient in the projector step so that the step is
    unitless and shrinks with the dimension. Falls back to 1 when the pool
    has no spread or the variance overflows.
    """
    pooled = np.vstack([X.data, Y.data])
    with np.errstate(over="ignore", invalid="ignore"):
        scale = float(np.sqrt(X.d * np.sum(np.var(pooled, axis=0))))
    if not np.isfinite(scale) or scale <= 0.0:
        return 1.0
    return scale


def estimate_pw(X: SampleSet, Y: SampleSet, cfg: PwConfig = PwConfig(),
                metric: GroundMetric = GroundMetric.EUCLIDEAN) -> PwEstimate:
    """
    Estimate the projected Wasserstein distance by penalized SGD ascent

    Each iteration draws a batch from both samples, finds the c-transform
    argmin of every x in the batch (over all of Y when m <= full_scan_limit,
    else over the y batch), averages the Danskin gradients, and ascends the
    network parameters and the projector. The projector step divides the
    cost gradient by projector_step_scale and adds the trace penalty
    -lambda A (A^T A - I). The start is initial_projector(X, Y, cfg).

    The reported value for k = 1 is the exact 1-D W1 between the samples
    projected on the orthonormalized final direction; for k > 1 it is the
    dual objective at the orthonormalized projector.

    Args:
        X: n x d sample from the first distribution
        Y: m x d sample from the second distribution
        cfg: Optimizer settings (deterministic given cfg.seed)
        metric: Ground metric

    Returns:
        PwEstimate

    Raises:
        DimensionError: If X and Y have different dimensions or k > d
        DivergenceError: If the batch objective becomes non-finite
    """
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    if cfg.k > X.d:
        raise DimensionError(f"Projection dimension k = {cfg.k} exceeds data dimension d = {X.d}")

    n, m = X.n, Y.n
    batch = min(cfg.batch_size, n, m)
    if batch < cfg.batch_size:
        logger.debug(f"Batch size clamped from {cfg.batch_size} to {batch}")
    full_scan = m <= cfg.full_scan_limit
    rng = cfg.seed.derive("pw-batches").generator()

    A = initial_projector(X, Y, cfg).entries.copy()
    step_scale = projector_step_scale(X, Y)
    net = init_network(cfg.layer_dims(), cfg.activation, cfg.seed.derive("pw-network"))
    theta = net.flat_params()
    eye = np.eye(cfg.k)
    # explicit penalty step is contractive only for step * lambda < 1
    a_step_cap = 1.0 / (2.0 * cfg.penalty)

    trace, defects = [], []
    for t in range(1, cfg.iterations + 1):
        ix = rng.integers(0, n, size=batch)
        iy = rng.integers(0, m, size=batch)
        xb, y0 = X.data[ix], Y.data[iy]
        candidates = Y.data if full_scan else y0

        zc = candidates @ A
        psi_c = forward_batch(net, zc)
        scores = _scores(xb @ A, zc, psi_c, metric)
        j_star = np.argmin(scores, axis=1)
        objective = float(np.mean(scores[np.arange(batch), j_star]) + np.mean(forward_batch(net, y0 @ A)))
        if not np.isfinite(objective):
            raise DivergenceError(t)

        grad_A, grad_theta, _ = _batch_gradients(net, A, xb, y0, candidates[j_star])
        eta = cfg.step_size(t)
        theta = theta + eta * grad_theta
        net = net.with_flat_params(theta)
        A = A + min(eta, a_step_cap) * (grad_A / step_scale - cfg.penalty * A @ (A.T @ A - eye))
        if not np.all(np.isfinite(A)):
            raise DivergenceError(t, f"Projection matrix became non-finite at iteration {t}")
        if cfg.reorthonormalize_every and t % cfg.reorthonormalize_every == 0:
            A = orthonormalize(A).entries.copy()

        defect = orthogonality_defect(ProjectionMatrix(A))
        trace.append(objective)
        defects.append(defect)
        if cfg.log_every and t % cfg.log_every == 0:
            logger.debug(f"iter {t}: objective={objective:.6f} defect={defect:.3e}")

    raw = ProjectionMatrix(A)
    projector = orthonormalize(A)
    if cfg.k == 1:
        value = w1_1d(project(projector, X), project(projector, Y)).cost
    else:
        value = dual_objective(net, projector, X, Y, metric)
    logger.info(f"PW estimate {value:.6f} (k={cfg.k}, lambda={cfg.penalty}, defect={defects[-1]:.3e})")

    return PwEstimate(
        value=float(value),
        projector=projector,
        network=net,
        trace=tuple(trace),
        defect=float(defects[-1]),
        defect_trace=tuple(defects),
        raw_projector=raw,
        config=cfg,
    )


def _unit_directions(d: int, grid_size: int) -> np.ndarray:
    """grid_size unit vectors covering directions up to sign"""
    if d == 1:
        return np.ones((1, 1))
    if d == 2:
        angles = np.pi * np.arange(grid_size) / grid_size
        return np.column_stack([np.cos(angles), np.sin(angles)])
    # Fibonacci lattice on the upper hemisphere
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = (np.arange(grid_size) + 0.5) / grid_size
    radius = np.sqrt(1.0 - z * z)
    phi = golden * np.arange(grid_size)
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def _w1_per_direction(PX: np.ndarray, PY: np.ndarray) -> np.ndarray:
    if PX.shape[0] == PY.shape[0]:
        return np.mean(np.abs(np.sort(PX, axis=0) - np.sort(PY, axis=0)), axis=0)
    return np.array([w1_1d(PX[:, g], PY[:, g]).cost for g in range(PX.shape[1])])


def pw_grid_oracle_k1(X: SampleSet, Y: SampleSet, grid_size: int = 3600) -> Tuple[float, np.ndarray]:
    """
    Grid search for the best single direction (k = 1) in d <= 3

    Evaluates exact 1-D W1 on grid_size directions (half circle for d = 2,
    Fibonacci hemisphere for d = 3); the maximum lower-bounds PW.

    Raises:
        SizeLimitError: If d > 3
        ConfigError: If grid_size < 360
    """
    if X.d != Y.d:
        raise DimensionError(f"Samples have different dimensions: {X.d} and {Y.d}")
    if X.d > 3:
        raise SizeLimitError(f"Grid oracle supports d <= 3, got d = {X.d}")
    if grid_size < 360:
        raise ConfigError(f"Grid oracle needs grid_size >= 360, got {grid_size}")

    directions = _unit_directions(X.d, grid_size)
    values = _w1_per_direction(X.data @ directions.T, Y.data @ directions.T)
    best = int(np.argmax(values))
    direction = canonical_signs(directions[best][:, None])[:, 0]
    return float(values[best]), direction


def penalty_gap_probe(X: SampleSet, Y: SampleSet, cfg: PwConfig,
                      lambdas: Sequence[float]) -> List[PenaltyProbeRow]:
    """
    One estimate_pw run per penalty value, sharing cfg.seed

    Raises:
        ConfigError: If lambdas are not positive and strictly increasing
    """
    lambdas = [float(lam) for lam in lambdas]
    if not lambdas or any(lam <= 0 for lam in lambdas):
        raise ConfigError(f"Penalty values must all be positive, got {lambdas}")
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ConfigError(f"Penalty values must be strictly increasing, got {lambdas}")

    rows = []
    for lam in lambdas:
        estimate = estimate_pw(X, Y, replace(cfg, penalty=lam))
        rows.append(PenaltyProbeRow(penalty=lam, value=estimate.value, defect=estimate.defect))
    return rows
