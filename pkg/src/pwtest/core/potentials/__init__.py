"""Discriminator potentials for the dual transport objective"""

from .network import (
    Activation,
    GradientBundle,
    PotentialNetwork,
    backward,
    backward_batch,
    forward,
    forward_batch,
    init_network,
    lipschitz_bound,
    load_checkpoint,
    num_params,
    save_checkpoint,
    weighted_gradients,
)

__all__ = [
    "Activation",
    "GradientBundle",
    "PotentialNetwork",
    "backward",
    "backward_batch",
    "forward",
    "forward_batch",
    "init_network",
    "lipschitz_bound",
    "load_checkpoint",
    "num_params",
    "save_checkpoint",
    "weighted_gradients",
]
