"""
Potential network psi_theta: R^k -> R
A small fully connected network with hand-written reverse-mode gradients
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..errors import ConfigError, DimensionError
from ..samples import RngSeed


class Activation(Enum):
    """Hidden-layer nonlinearity; the output layer is always affine"""

    RELU = "relu"
    TANH = "tanh"

    def __call__(self, h: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(h, 0.0)
        return np.tanh(h)

    def derivative(self, h: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Derivative given pre-activation h and activation a; ReLU'(0) = 0"""
        if self is Activation.RELU:
            return (h > 0.0).astype(np.float64)
        return 1.0 - a * a

    @classmethod
    def parse(cls, value) -> "Activation":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"Unknown activation '{value}'. Supported: {[a.value for a in cls]}")


@dataclass(frozen=True)
class GradientBundle:
    """Partials of psi at one input: d_theta in flat layer-major order, d_input of length k"""

    d_theta: np.ndarray
    d_input: np.ndarray


@dataclass(frozen=True, eq=False)
class PotentialNetwork:
    """
    Feed-forward network [k, h_1, ..., h_L, 1]

    weights[l] has shape (out, in) and biases[l] shape (out,). Instances
    are never modified in place; the optimizer builds a new network from
    an updated flat parameter vector.
    """

    layer_dims: Tuple[int, ...]
    activation: Activation
    weights: Tuple[np.ndarray, ...]
    biases: Tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = _validate_dims(self.layer_dims)
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise ConfigError(f"Expected {len(dims) - 1} layers for dims {list(dims)}")
        weights, biases = [], []
        for layer, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
            W = np.array(self.weights[layer], dtype=np.float64).reshape(fan_out, fan_in)
            b = np.array(self.biases[layer], dtype=np.float64).reshape(fan_out)
            if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
                raise ConfigError(f"Layer {layer} has non-finite parameters")
            W.setflags(write=False)
            b.setflags(write=False)
            weights.append(W)
            biases.append(b)
        object.__setattr__(self, "layer_dims", dims)
        object.__setattr__(self, "activation", Activation.parse(self.activation))
        object.__setattr__(self, "weights", tuple(weights))
        object.__setattr__(self, "biases", tuple(biases))

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def num_params(self) -> int:
        return num_params(self.layer_dims)

    @classmethod
    def from_layers(cls, weights: Sequence, biases: Sequence, activation="relu") -> "PotentialNetwork":
        """Build a network from explicit per-layer weights (out x in) and biases"""
        weights = [np.atleast_2d(np.asarray(W, dtype=np.float64)) for W in weights]
        dims = [weights[0].shape[1]] + [W.shape[0] for W in weights]
        return cls(tuple(dims), Activation.parse(activation), tuple(weights), tuple(biases))

    @classmethod
    def zeros(cls, dims: Sequence[int], activation="relu") -> "PotentialNetwork":
        dims = _validate_dims(dims)
        return cls.from_flat(dims, activation, np.zeros(num_params(dims)))

    @classmethod
    def from_flat(cls, dims: Sequence[int], activation, params: np.ndarray) -> "PotentialNetwork":
        dims = _validate_dims(dims)
        params = np.asarray(params, dtype=np.float64).ravel()
        if params.size != num_params(dims):
            raise ConfigError(f"Dims {list(dims)} need {num_params(dims)} parameters, got {params.size}")
        weights, biases = [], []
        offset = 0
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            weights.append(params[offset:offset + fan_out * fan_in].reshape(fan_out, fan_in))
            offset += fan_out * fan_in
            biases.append(params[offset:offset + fan_out])
            offset += fan_out
        return cls(dims, Activation.parse(activation), tuple(weights), tuple(biases))

    def flat_params(self) -> np.ndarray:
        """Layer-major flat view: W_0 (row-major), b_0, W_1, b_1, ..."""
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.extend([W.ravel(), b])
        return np.concatenate(parts)

    def with_flat_params(self, params: np.ndarray) -> "PotentialNetwork":
        return PotentialNetwork.from_flat(self.layer_dims, self.activation, params)

    def to_dict(self) -> Dict[str, Any]:
        """Checkpoint document {dims, activation, params}"""
        return {
            "dims": list(self.layer_dims),
            "activation": self.activation.value,
            "params": self.flat_params().tolist(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "PotentialNetwork":
        try:
            return cls.from_flat(payload["dims"], payload["activation"], np.asarray(payload["params"]))
        except KeyError as e:
            raise ConfigError(f"Network checkpoint is missing key {e}")


def _validate_dims(dims) -> Tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in dims)
    except (TypeError, ValueError):
        raise ConfigError(f"Layer dims must be a list of integers, got {dims!r}")
    if len(dims) < 2:
        raise ConfigError(f"Layer dims need at least an input and an output size, got {list(dims)}")
    if any(x < 1 for x in dims):
        raise ConfigError(f"All layer sizes must be >= 1, got {list(dims)}")
    if dims[-1] != 1:
        raise ConfigError(f"Potential networks have scalar output; dims must end with 1, got {list(dims)}")
    return dims


def num_params(dims: Sequence[int]) -> int:
    return int(sum(fan_out * fan_in + fan_out for fan_in, fan_out in zip(dims[:-1], dims[1:])))


def init_network(dims: Sequence[int], activation="relu", seed: RngSeed = RngSeed(0)) -> PotentialNetwork:
    """
    Randomly initialized potential network

    Weights are standard normal scaled by 1/sqrt(fan_in); biases start at zero.

    Args:
        dims: [k, h_1, ..., h_L, 1]
        activation: "relu" or "tanh" (hidden layers only)
        seed: Random stream for the weights

    Returns:
        PotentialNetwork

    Raises:
        ConfigError: If dims is malformed
    """
    dims = _validate_dims(dims)
    rng = seed.generator()
    weights = [
        rng.standard_normal((fan_out, fan_in)) / np.sqrt(fan_in)
        for fan_in, fan_out in zip(dims[:-1], dims[1:])
    ]
    biases = [np.zeros(fan_out) for fan_out in dims[1:]]
    return PotentialNetwork(dims, Activation.parse(activation), tuple(weights), tuple(biases))


def _as_batch(net: PotentialNetwork, Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim == 1:
        Z = Z.reshape(-1, net.input_dim) if net.input_dim == 1 else Z.reshape(1, -1)
    if Z.ndim != 2 or Z.shape[1] != net.input_dim:
        raise DimensionError(f"Network expects inputs of length {net.input_dim}, got shape {Z.shape}")
    return Z


def _forward_pass(net: PotentialNetwork, Z: np.ndarray) -> Tuple[np.ndarray, List[Tuple[np.ndarray, np.ndarray]]]:
    """Returns outputs (N,) and the (pre-activation, activation) pair of every layer input"""
    memory = []
    a = Z
    last = len(net.weights) - 1
    for layer, (W, b) in enumerate(zip(net.weights, net.biases)):
        h = a @ W.T + b
        memory.append((h, a))
        a = h if layer == last else net.activation(h)
    return a[:, 0], memory


def forward_batch(net: PotentialNetwork, Z) -> np.ndarray:
    """psi evaluated on every row of Z (N x k)"""
    out, _ = _forward_pass(net, _as_batch(net, Z))
    return out


def weighted_gradients(net: PotentialNetwork, Z, weights) -> Tuple[np.ndarray, np.ndarray]:
    """
    Reverse-mode pass for sum_i w_i psi(z_i)

    Returns:
        (flat parameter gradient, per-row input gradients w_i * dpsi/dz(z_i))
    """
    Z = _as_batch(net, Z)
    w = np.asarray(weights, dtype=np.float64).reshape(-1, 1)
    if w.shape[0] != Z.shape[0]:
        raise DimensionError(f"Got {w.shape[0]} weights for {Z.shape[0]} inputs")
    _, memory = _forward_pass(net, Z)

    grads_W = [None] * len(net.weights)
    grads_b = [None] * len(net.weights)
    delta = w
    for layer in range(len(net.weights) - 1, -1, -1):
        _, a_prev = memory[layer]
        grads_W[layer] = delta.T @ a_prev
        grads_b[layer] = delta.sum(axis=0)
        delta = delta @ net.weights[layer]
        if layer > 0:
            h_prev, _ = memory[layer - 1]
            delta = delta * net.activation.derivative(h_prev, a_prev)

    flat = np.concatenate([part for pair in zip(grads_W, grads_b) for part in (pair[0].ravel(), pair[1])])
    return flat, delta


def forward(net: PotentialNetwork, z) -> float:
    """
    psi_theta(z) for a single input vector

    Raises:
        DimensionError: If z does not have length k
    """
    z = np.asarray(z, dtype=np.float64).ravel()
    if z.size != net.input_dim:
        raise DimensionError(f"Network expects inputs of length {net.input_dim}, got {z.size}")
    return float(forward_batch(net, z.reshape(1, -1))[0])


def backward(net: PotentialNetwork, z) -> GradientBundle:
    """Exact partials of psi_theta(z) with respect to theta and z"""
    z = np.asarray(z, dtype=np.float64).ravel()
    if z.size != net.input_dim:
        raise DimensionError(f"Network expects inputs of length {net.input_dim}, got {z.size}")
    d_theta, d_input = weighted_gradients(net, z.reshape(1, -1), [1.0])
    return GradientBundle(d_theta=d_theta, d_input=d_input[0])


def lipschitz_bound(net: PotentialNetwork) -> float:
    """Product of layer spectral norms, a Lipschitz constant in z for 1-Lipschitz activations"""
    return float(np.prod([np.linalg.norm(W, 2) for W in net.weights]))


def backward_batch(net: PotentialNetwork, Z) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-row partials of psi over a batch

    Returns:
        (N x num_params parameter gradients, N x k input gradients)
    """
    Z = _as_batch(net, Z)
    rows = [weighted_gradients(net, Z[i:i + 1], [1.0]) for i in range(Z.shape[0])]
    d_theta = np.vstack([g for g, _ in rows]) if rows else np.zeros((0, net.num_params))
    d_input = np.vstack([dz for _, dz in rows]) if rows else np.zeros((0, net.input_dim))
    return d_theta, d_input


def save_checkpoint(net: PotentialNetwork, file_path) -> None:
    """Write the {dims, activation, params} JSON checkpoint"""
    from ...utils.io_handler import write_json

    write_json(net.to_dict(), file_path)


def load_checkpoint(file_path) -> PotentialNetwork:
    """
    Raises:
        ConfigError: If the document is not a valid checkpoint
    """
    from ...utils.io_handler import read_json

    return PotentialNetwork.from_dict(read_json(file_path))
