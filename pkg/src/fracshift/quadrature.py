"""Shared quadrature settings and composite Gauss-Legendre rules."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

DEFAULT_REL_TOL = 1e-10


def default_rel_tol() -> float:
    """Default relative tolerance, overridable through ``FRACSHIFT_TOL``."""
    raw = os.environ.get("FRACSHIFT_TOL")
    if raw is None:
        return DEFAULT_REL_TOL
    return float(raw)


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings shared by the oracle integrators.

    ``cutoff`` bounds the integration domain, ``nodes`` is the Gauss-Legendre
    order used per panel, ``epsilon`` is the Gaussian regularization of the
    oscillatory integrals.
    """

    cutoff: float = 200.0
    nodes: int = 32
    epsilon: float = 0.0
    rel_tol: float = None

    def __post_init__(self):
        if self.rel_tol is None:
            object.__setattr__(self, "rel_tol", default_rel_tol())
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if self.nodes < 16:
            raise ValueError("nodes must be at least 16")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not 0 < self.rel_tol <= 1e-2:
            raise ValueError("rel_tol must lie in (0, 1e-2]")

    def with_(self, **changes) -> QuadratureConfig:
        return replace(self, **changes)


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point rule on every panel ``[e_i, e_{i+1}]``."""
    x, w = gauss_legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()
