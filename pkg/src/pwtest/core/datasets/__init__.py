"""Synthetic benchmark data and density exports"""

from .kde import SILVERMAN, kde_export, kde_frame, silverman_bandwidth
from .synthetic import DEFAULT_DELTA, DatasetSpec, Family, Role, generate, h0_pair, h1_pair

__all__ = [
    "DEFAULT_DELTA",
    "DatasetSpec",
    "Family",
    "Role",
    "SILVERMAN",
    "generate",
    "h0_pair",
    "h1_pair",
    "kde_export",
    "kde_frame",
    "silverman_bandwidth",
]
