"""
Finite-sample acceptance thresholds
Rademacher bounds, IPM / PW / MMD acceptance regions and plug-in constants
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import expit

from ..errors import ConfigError
from ..samples import SampleSet

# Largest sample for the exact O(n^2) diameter scan
DIAMETER_EXACT_LIMIT = 4096

THRESHOLD_METHODS = ("pw", "mmd")


def _check_positive(name: str, value: float, allow_zero: bool = False):
    if not np.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ConfigError(f"{name} must be finite and {bound}, got {value}")


@dataclass(frozen=True)
class ThresholdParams:
    """
    Constants entering the acceptance thresholds

    Diameters and second moments may be zero (a sample of one repeated
    point); every threshold then reduces to its remaining terms.
    """

    alpha: float
    n: int
    m: int
    B_mu: float
    B_nu: float
    second_moment_mu: float
    second_moment_nu: float
    L: float = 1.0
    k: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n < 1 or self.m < 1:
            raise ConfigError(f"Sample sizes must be >= 1, got n = {self.n}, m = {self.m}")
        if self.k < 1:
            raise ConfigError(f"Projection dimension k must be >= 1, got {self.k}")
        _check_positive("L", self.L)
        for name in ("B_mu", "B_nu", "second_moment_mu", "second_moment_nu"):
            _check_positive(name, getattr(self, name), allow_zero=True)

    @property
    def log_term(self) -> float:
        """log(2 / alpha), natural logarithm"""
        return float(np.log(2.0 / self.alpha))

    @classmethod
    def from_samples(cls, X: SampleSet, Y: SampleSet, alpha: float, k: int = 1, L: float = 1.0) -> "ThresholdParams":
        constants = estimate_constants(X, Y)
        return cls(alpha=alpha, n=X.n, m=Y.n, L=L, k=k, **constants.to_dict())

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class EstimatedConstants:
    B_mu: float
    B_nu: float
    second_moment_mu: float
    second_moment_nu: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def rademacher_bound_projected(k: int, n: int, second_moment: float) -> float:
    """Rademacher complexity bound sqrt(2 k E||X||^2 / n) for the projected 1-Lipschitz class"""
    return float(np.sqrt(2.0 * k * second_moment / n))


def rademacher_bound_kernel(K: float, n: int) -> float:
    """Rademacher complexity sqrt(K / n) of the unit RKHS ball with kernel bound K"""
    return float(np.sqrt(K / n))


def _concentration_term(params: ThresholdParams, part: int) -> float:
    if part == 1:
        scale = (params.m + params.n) / (2.0 * params.m * params.n)
    else:
        scale = 1.0 / params.n
    return float(np.sqrt(params.L ** 2 * params.B_mu ** 2 * scale * params.log_term))


def _resolve_part(params: ThresholdParams, part: Optional[int]) -> int:
    if part is None:
        return 2 if params.n == params.m else 1
    if part not in (1, 2):
        raise ConfigError(f"part must be 1 or 2, got {part}")
    if part == 2 and params.n != params.m:
        raise ConfigError(f"The equal-size region needs n = m, got n = {params.n}, m = {params.m}")
    return part


def ipm_threshold(params: ThresholdParams, rademacher_n: float = 0.0, rademacher_m: float = 0.0,
                  part: Optional[int] = None) -> float:
    """
    Acceptance threshold for a generic IPM test of level alpha

    Two-sample form (part 1):
        sqrt(L^2 B^2 (m + n) / (2 m n) log(2/alpha)) + 2 (R_n + R_m)
    Equal-size form (part 2, n = m):
        sqrt(L^2 B^2 / n log(2/alpha)) + 2 R_n

    Args:
        params: Threshold constants
        rademacher_n: Rademacher complexity bound at sample size n
        rademacher_m: Rademacher complexity bound at sample size m (part 1 only)
        part: Force a form; default is part 2 when n = m and part 1 otherwise

    Returns:
        Threshold gamma; H0 is accepted iff the statistic is below gamma
    """
    part = _resolve_part(params, part)
    concentration = _concentration_term(params, part)
    if part == 1:
        return concentration + 2.0 * (rademacher_n + rademacher_m)
    return concentration + 2.0 * rademacher_n


def _pw_rademacher(params: ThresholdParams):
    r_n = rademacher_bound_projected(params.k, params.n, params.second_moment_mu)
    r_m = rademacher_bound_projected(params.k, params.m, params.second_moment_nu)
    return r_n, r_m


def pw_threshold(params: ThresholdParams) -> float:
    """
    Acceptance threshold for the projected Wasserstein test (L = 1)

    For n = m this is B sqrt(log(2/alpha)) / sqrt(n) + 2 sqrt(2k E||X||^2 / n).
    Otherwise the two-sample form is used with the moment of each sample
    in its own Rademacher term.
    """
    r_n, r_m = _pw_rademacher(params)
    unit = params if params.L == 1.0 else _with_lipschitz(params, 1.0)
    return ipm_threshold(unit, r_n, r_m)


def _with_lipschitz(params: ThresholdParams, L: float) -> ThresholdParams:
    payload = params.to_dict()
    payload["L"] = L
    return ThresholdParams(**payload)


def mmd_threshold(K_bound: float, B_mu: float, n: int, alpha: float) -> float:
    """sqrt(2K / n) (sqrt(2) + B sqrt(log(2/alpha))), the equal-size MMD region"""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    _check_positive("K_bound", K_bound)
    return float(np.sqrt(2.0 * K_bound / n) * (np.sqrt(2.0) + B_mu * np.sqrt(np.log(2.0 / alpha))))


def mmd_threshold_two_sample(params: ThresholdParams, K_bound: float = 1.0) -> float:
    """MMD region for unequal sizes: the IPM form with L = sqrt(2K) and R = sqrt(K / size)"""
    kernel_params = _with_lipschitz(params, float(np.sqrt(2.0 * K_bound)))
    return ipm_threshold(
        kernel_params,
        rademacher_bound_kernel(K_bound, params.n),
        rademacher_bound_kernel(K_bound, params.m),
        part=1,
    )


def method_threshold(method: str, params: ThresholdParams, K_bound: float = 1.0) -> float:
    """Threshold matching a test method ('pw' or 'mmd')"""
    if method == "pw":
        return pw_threshold(params)
    if method == "mmd":
        if params.n == params.m:
            return mmd_threshold(K_bound, params.B_mu, params.n, params.alpha)
        return mmd_threshold_two_sample(params, K_bound)
    raise ConfigError(f"Unsupported method: {method}. Supported methods: {list(THRESHOLD_METHODS)}")


def sigmoid_preprocess(X: SampleSet) -> SampleSet:
    """Entrywise logistic map into (0, 1)^d; any output set has diameter <= sqrt(d)"""
    return SampleSet(expit(X.data))


def _diameter(X: SampleSet) -> float:
    if X.n < 2:
        return 0.0
    if X.n <= DIAMETER_EXACT_LIMIT:
        return float(np.max(pdist(X.data)))
    # bounding-box diagonal, an upper bound on the diameter
    return float(np.linalg.norm(X.data.max(axis=0) - X.data.min(axis=0)))


def estimate_constants(X: SampleSet, Y: SampleSet) -> EstimatedConstants:
    """
    Plug-in diameters and second moments

    Diameters are the largest within-sample l2 distance (exact up to
    DIAMETER_EXACT_LIMIT rows, bounding-box diagonal beyond); second
    moments are sample means of ||x||^2.
    """
    return EstimatedConstants(
        B_mu=_diameter(X),
        B_nu=_diameter(Y),
        second_moment_mu=X.second_moment(),
        second_moment_nu=Y.second_moment(),
    )


def concentration_probability(eps: float, n: int, m: int, B_mu: float, B_nu: float) -> float:
    """
    Lower bound 1 - 2 exp(-2 eps^2 m n / (m B_mu^2 + n B_nu^2)) on the
    probability that the empirical PW is within eps plus the Rademacher
    terms of the population value; clipped at 0
    """
    if eps <= 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    denominator = m * B_mu ** 2 + n * B_nu ** 2
    if denominator == 0:
        return 1.0
    return float(max(0.0, 1.0 - 2.0 * np.exp(-2.0 * eps ** 2 * m * n / denominator)))


def threshold_report(params: ThresholdParams, method: str = "pw", K_bound: float = 1.0) -> Dict[str, Any]:
    """
    Per-term breakdown of a threshold

    Returns:
        {alpha, n, m, method, constants, terms, threshold}; the terms sum
        to the threshold
    """
    if method == "pw":
        part = _resolve_part(params, None)
        r_n, r_m = _pw_rademacher(params)
        unit = _with_lipschitz(params, 1.0)
        terms = {
            "concentration": _concentration_term(unit, part),
            "rademacher_n": 2.0 * r_n,
            "rademacher_m": 2.0 * r_m if part == 1 else 0.0,
        }
        constants = {**unit.to_dict(), "part": part}
    elif method == "mmd":
        part = _resolve_part(params, None)
        kernel_params = _with_lipschitz(params, float(np.sqrt(2.0 * K_bound)))
        terms = {
            "concentration": _concentration_term(kernel_params, part),
            "rademacher_n": 2.0 * rademacher_bound_kernel(K_bound, params.n),
            "rademacher_m": 2.0 * rademacher_bound_kernel(K_bound, params.m) if part == 1 else 0.0,
        }
        constants = {**kernel_params.to_dict(), "K_bound": K_bound, "part": part}
    else:
        raise ConfigError(f"Unsupported method: {method}. Supported methods: {list(THRESHOLD_METHODS)}")

    for key in ("alpha", "n", "m"):
        constants.pop(key)
    return {
        "alpha": params.alpha,
        "n": params.n,
        "m": params.m,
        "method": method,
        "constants": constants,
        "terms": terms,
        "threshold": method_threshold(method, params, K_bound),
    }
