"""Exact optimal transport in the projected space"""

from .exact import TransportResult, w1_1d, w1_exact_small

__all__ = [
    "TransportResult",
    "w1_1d",
    "w1_exact_small",
]
