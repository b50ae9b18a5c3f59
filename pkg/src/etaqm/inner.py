"""PT and eta inner products, Gram matrices, orthogonality checks.

The bilinear form is

    <u1, u2>_w = integral w(x) conj(u2(-x)) u1(x) dx,

evaluated by trapezoid quadrature on the symmetric grid (the Dirichlet
endpoints contribute zero, so the rule reduces to h * sum).  w == 1 gives the
PT inner product; w = exp[-2 beta int_0^x nu] gives the eta form appropriate
to the gauged Hamiltonian.  The parity flip is index reversal, which the
mirror-exact grid makes exact.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, ParameterError, ZeroPseudoNormError
from .grid import Grid

__all__ = [
    "weighted_inner", "gram", "operator_inner", "pseudo_normalize", "parity_flip",
]


def parity_flip(u: np.ndarray) -> np.ndarray:
    """(P u)_j = u_{N-1-j}, i.e. u(x) -> u(-x) on the symmetric grid."""
    return u[::-1]


def _check_weight(grid: Grid, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w)
    if w.shape != (grid.N,):
        raise DimensionError(f"weight length {w.shape} does not match grid N={grid.N}")
    if np.iscomplexobj(w):
        if np.any(np.abs(w.imag) > 1e-12 * (1.0 + np.abs(w))):
            raise ParameterError("weight samples must be real")
        w = w.real
    return w


def weighted_inner(grid: Grid, w: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> complex:
    """Trapezoid quadrature of sum_j w(x_j) conj(u2(-x_j)) u1(x_j)."""
    w = _check_weight(grid, w)
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    if u1.shape != (grid.N,) or u2.shape != (grid.N,):
        raise DimensionError(
            f"state length mismatch: {u1.shape}, {u2.shape} vs grid N={grid.N}"
        )
    return complex(grid.h * np.sum(w * np.conj(u2[::-1]) * u1))


def pseudo_normalize(grid: Grid, w: np.ndarray, u: np.ndarray, index: int = 0
                     ) -> tuple[np.ndarray, complex]:
    """Scale u so its pseudo-norm has unit modulus; returns (state, raw norm).

    The pseudo-norm <u, u>_w can be negative or complex; only its modulus is
    scaled away, so sign and phase survive in the Gram diagonal.
    """
    p = weighted_inner(grid, w, u, u)
    if abs(p) < 1e-12:
        raise ZeroPseudoNormError(index, p)
    return u / np.sqrt(abs(p)), p


def gram(grid: Grid, w: np.ndarray, vectors) -> np.ndarray:
    """G_{mn} = <v_n, v_m>_w with each vector pre-normalized to |G_nn| = 1.

    Diagonal entries keep the pseudo-norm sign (or phase, when the raw value
    is not real); raising on |<v,v>_w| < 1e-12 flags self-orthogonal states.
    """
    normed = [pseudo_normalize(grid, w, v, index=n)[0] for n, v in enumerate(vectors)]
    m = len(normed)
    G = np.empty((m, m), dtype=complex)
    for a in range(m):
        for b in range(m):
            G[a, b] = weighted_inner(grid, w, normed[b], normed[a])
    return G


def operator_inner(grid: Grid, eta_matrix: np.ndarray, u1: np.ndarray, u2: np.ndarray
                   ) -> complex:
    """Quadrature of conj(u2(-x)) (eta u1)(x) for differential eta.

    Experimental: the multiplicative-weight form is the one the conservation
    and orthogonality statements are verified with; this generalization to
    operator-valued eta is exposed for exploration only.
    """
    if eta_matrix.shape != (grid.N, grid.N):
        raise DimensionError(
            f"eta shape {eta_matrix.shape} does not match grid N={grid.N}"
        )
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    return complex(grid.h * np.sum(np.conj(u2[::-1]) * (eta_matrix @ u1)))
