"""Shared cached builders for the heavy numerical fixtures.

Dense eigendecompositions at desk scale take seconds; tests share them
through memoized builders instead of pytest fixtures so that any test module
(including the acceptance suite) can reuse the same spectra.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

import etaqm as q
from etaqm import eigen, expr
from etaqm import operators as ops

GAUGE_BETA = 0.5
L_BOX = 16.0


@lru_cache(maxsize=None)
def grid(N: int, L: float = L_BOX):
    return q.make_grid(L, N)


def _potential(kind: str, p1: float, p2: float) -> ops.PotentialSpec:
    if kind == "scarf2":
        return q.scarf2_potential(p1, p2)
    if kind == "scarf2-raw":
        return q.scarf2_raw_potential(p1, p2)
    if kind == "special-b1":
        return ops.SpecialB1(p1)
    if kind == "first-order":
        return ops.FirstOrderFamily(p1, p2)
    if kind == "free":
        return ops.CustomPotential(expr.parse("0"))
    raise ValueError(kind)


@lru_cache(maxsize=None)
def hamiltonian(kind: str, p1: float, p2: float, N: int, beta: float = 0.0,
                accuracy: int = 2) -> np.ndarray:
    g = grid(N)
    gauge = q.GaugeSpec(beta, expr.parse("tanh(x)")) if beta else None
    return q.build_hamiltonian(g, _potential(kind, p1, p2), gauge, accuracy)


@lru_cache(maxsize=None)
def eig_values(kind: str, p1: float, p2: float, N: int, beta: float = 0.0,
               accuracy: int = 2) -> np.ndarray:
    return eigen.eig(hamiltonian(kind, p1, p2, N, beta, accuracy)).eigenvalues


@lru_cache(maxsize=None)
def eig_full(kind: str, p1: float, p2: float, N: int, beta: float = 0.0,
             accuracy: int = 2):
    return eigen.eig(hamiltonian(kind, p1, p2, N, beta, accuracy), want_vectors=True)


@lru_cache(maxsize=None)
def bound_states(kind: str, p1: float, p2: float, N: int, beta: float = 0.0,
                 accuracy: int = 2):
    """Two-grid (N/2 vs N) filtered bound candidates."""
    coarse = eig_values(kind, p1, p2, N // 2, beta, accuracy)
    fine = eig_values(kind, p1, p2, N, beta, accuracy)
    return eigen.converged_bound_states(coarse, fine)


def bound_vectors(kind: str, p1: float, p2: float, N: int, levels,
                  beta: float = 0.0, accuracy: int = 2):
    """Eigenvectors nearest to the requested levels, as grid samples."""
    rep = eig_full(kind, p1, p2, N, beta, accuracy)
    out = []
    for e in levels:
        i = int(np.argmin(np.abs(rep.eigenvalues - e)))
        out.append(rep.vectors[:, i])
    return out


def exact_gauge_weight(N: int) -> np.ndarray:
    """exp[-2 beta ln cosh x] = sech x for the beta = 1/2, nu = tanh fixture."""
    return 1.0 / np.cosh(grid(N).points)
