"""Discretized Hamiltonians, metric (eta) operators, and identity checks.

Hamiltonians (hbar = 2m = 1, p = -i d/dx):

    H      = -D2 + diag(V)
    H_beta = -D2 + 2 beta diag(nu) D1 + diag(beta nu' - beta^2 nu^2 + V)

The gauged form is the expansion of [p + i beta nu(x)]^2 + V(x); nu must be
real and odd.  Metric operators come in four families: the identity, parity,
a multiplicative gauge weight exp[-2 beta int_0^x nu], a first-order
differential operator D1 + i g(x), and a second-order Hermitian operator
D2 - 2 i a(x) D1 + b(x) with b = -V + i a' - 2 a^2 - delta.

Intertwining (eta H = H^dagger eta) is verified on Gaussian probe states,
not entrywise: differential operators truncated to a Dirichlet box carry
O(1) boundary-row defects that have no physical meaning for decaying states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr
from .errors import ConstraintError, DimensionError, OddFunctionError, ParameterError, PoleError
from .expr import Expr
from .grid import Grid, diff_matrix

__all__ = [
    "ScarfII", "FirstOrderFamily", "SpecialB1", "CustomPotential", "PotentialSpec",
    "GaugeSpec",
    "IdentityEta", "ParityEta", "MultiplicativeEta", "FirstOrderEta", "SecondOrderEta",
    "EtaSpec",
    "adjoint", "potential_on_grid", "build_hamiltonian", "build_eta",
    "gauge_weight", "gauge_antiderivative", "gaussian_probes",
    "intertwining_residual", "hermiticity_indicators", "eta_plus_minus",
    "susy_pair", "verify_factorization", "FactorizationReport",
]

_ODD_TOL = 1e-10


def _is_integer(v: float, tol: float = 1e-9) -> bool:
    return abs(v - round(v)) <= tol


# ---------------------------------------------------------------------------
# Potential and gauge specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScarfII:
    """Complex Scarf II strengths derived from (A, B):
    V = -V1 sech^2 x - i V2 sech x tanh x, V1 = [B^2 (2A+1)^2 + 3]/4,
    V2 = -B (2A+1)."""

    A: float
    B: float

    def __post_init__(self):
        if not self.A + 0.5 > 0:
            raise ConstraintError(f"require A + 1/2 > 0, got A = {self.A}")
        if not self.B > 0:
            raise ConstraintError(f"require B > 0, got B = {self.B}")
        if _is_integer(self.A - self.B + 0.5):
            raise ConstraintError(
                f"A - B + 1/2 = {self.A - self.B + 0.5} must not be an integer"
            )

    @property
    def V1(self) -> float:
        return 0.25 * (self.B**2 * (2 * self.A + 1) ** 2 + 3)

    @property
    def V2(self) -> float:
        return -self.B * (2 * self.A + 1)


@dataclass(frozen=True)
class FirstOrderFamily:
    """V = -d^2 sech^2 x + k + i d sech x tanh x, the potential intertwined by
    the first-order metric d/dx + i d sech x."""

    d: float
    k: float = 0.0


@dataclass(frozen=True)
class SpecialB1:
    """V = -(A^2 + A + 1) sech^2 x + i (2A+1) sech x tanh x (the B = 1 point)."""

    A: float


@dataclass(frozen=True)
class CustomPotential:
    V: Expr


PotentialSpec = ScarfII | FirstOrderFamily | SpecialB1 | CustomPotential


@dataclass(frozen=True)
class GaugeSpec:
    """Imaginary gauge coupling: beta real, nu(x) real and odd."""

    beta: float
    nu: Expr


# ---------------------------------------------------------------------------
# Eta specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityEta:
    pass


@dataclass(frozen=True)
class ParityEta:
    pass


@dataclass(frozen=True)
class MultiplicativeEta:
    beta: float
    nu: Expr


@dataclass(frozen=True)
class FirstOrderEta:
    """eta = D1 + i g(x); anti-Hermitian on interior rows for even g."""

    g: Expr


@dataclass(frozen=True)
class SecondOrderEta:
    """eta = D2 - 2 i a(x) D1 + b(x), b = -V + i a' - 2 a^2 - delta."""

    a: Expr
    gamma: float
    delta: float
    V: PotentialSpec


EtaSpec = IdentityEta | ParityEta | MultiplicativeEta | FirstOrderEta | SecondOrderEta


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def adjoint(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def potential_on_grid(grid: Grid, spec: PotentialSpec) -> np.ndarray:
    """Complex potential samples V(x_j)."""
    x = grid.points
    sech = 1.0 / np.cosh(x)
    tanh = np.tanh(x)
    if isinstance(spec, ScarfII):
        return -spec.V1 * sech**2 - 1j * spec.V2 * sech * tanh
    if isinstance(spec, SpecialB1):
        A = spec.A
        return -(A * A + A + 1) * sech**2 + 1j * (2 * A + 1) * sech * tanh
    if isinstance(spec, FirstOrderFamily):
        d = spec.d
        return -d * d * sech**2 + spec.k + 1j * d * sech * tanh
    if isinstance(spec, CustomPotential):
        return expr.evaluate_on(spec.V, x)
    raise ParameterError(f"unknown potential spec {spec!r}")


def _check_odd_real(grid: Grid, nu: Expr) -> np.ndarray:
    """Samples of nu on the grid, verified real-valued and odd."""
    vals = expr.evaluate_on(nu, grid.points)
    scale = 1.0 + np.abs(vals)
    if np.any(np.abs(vals.imag) > _ODD_TOL * scale):
        raise OddFunctionError(f"nu = {expr.to_source(nu)} is not real-valued on the grid")
    v = vals.real
    if np.any(np.abs(v + v[::-1]) > _ODD_TOL * scale):
        raise OddFunctionError(f"nu = {expr.to_source(nu)} is not odd on the grid")
    return v


def build_hamiltonian(
    grid: Grid,
    V: PotentialSpec,
    gauge: GaugeSpec | None = None,
    accuracy: int = 2,
) -> np.ndarray:
    """H = -D2 + diag(V), or the gauged H_beta when a GaugeSpec is given."""
    D2 = diff_matrix(grid, 2, accuracy)
    Vx = potential_on_grid(grid, V)
    H = -D2 + np.diag(Vx)
    if gauge is not None and gauge.beta != 0.0:
        b = gauge.beta
        nu = _check_odd_real(grid, gauge.nu)
        nup = expr.evaluate_on(expr.derive(gauge.nu), grid.points).real
        D1 = diff_matrix(grid, 1, accuracy)
        H = H + (2.0 * b * nu)[:, None] * D1 + np.diag(b * nup - b * b * nu * nu)
    elif gauge is not None:
        _check_odd_real(grid, gauge.nu)  # beta = 0: still validate the spec
    return H


def gauge_antiderivative(grid: Grid, nu: Expr) -> np.ndarray:
    """F(x_j) = int_0^{x_j} nu(y) dy by composite trapezoid cumulative sums.

    The lower limit sits at x = 0; for even N the anchor is interpolated
    between the two middle nodes at trapezoid accuracy.  For odd nu the
    result is even and is symmetrized to make that exact in floating point.
    """
    v = _check_odd_real(grid, nu)
    seg = 0.5 * grid.h * (v[1:] + v[:-1])
    G = np.concatenate([[0.0], np.cumsum(seg)])
    if grid.N % 2 == 1:
        G0 = G[(grid.N - 1) // 2]
    else:
        G0 = 0.5 * (G[grid.N // 2 - 1] + G[grid.N // 2])
    F = G - G0
    return 0.5 * (F + F[::-1])


def gauge_weight(grid: Grid, beta: float, nu: Expr) -> np.ndarray:
    """Multiplicative metric samples exp[-2 beta int_0^x nu]."""
    return np.exp(-2.0 * beta * gauge_antiderivative(grid, nu))


def parity_matrix(N: int) -> np.ndarray:
    P = np.zeros((N, N), dtype=complex)
    P[np.arange(N), np.arange(N)[::-1]] = 1.0
    return P


def build_eta(grid: Grid, spec: EtaSpec, accuracy: int = 2) -> np.ndarray:
    """Dense matrix for any of the metric families."""
    N = grid.N
    if isinstance(spec, IdentityEta):
        return np.eye(N, dtype=complex)
    if isinstance(spec, ParityEta):
        return parity_matrix(N)
    if isinstance(spec, MultiplicativeEta):
        return np.diag(gauge_weight(grid, spec.beta, spec.nu)).astype(complex)
    if isinstance(spec, FirstOrderEta):
        g = expr.evaluate_on(spec.g, grid.points)
        return diff_matrix(grid, 1, accuracy) + 1j * np.diag(g)
    if isinstance(spec, SecondOrderEta):
        x = grid.points
        a = expr.evaluate_on(spec.a, x).real
        ap = expr.evaluate_on(expr.derive(spec.a), x).real
        Vx = potential_on_grid(grid, spec.V)
        b = -Vx + 1j * ap - 2.0 * a * a - spec.delta
        D1 = diff_matrix(grid, 1, accuracy)
        D2 = diff_matrix(grid, 2, accuracy)
        return D2 + (-2j * a)[:, None] * D1 + np.diag(b)
    raise ParameterError(f"unknown eta spec {spec!r}")


# ---------------------------------------------------------------------------
# Probe-based residuals
# ---------------------------------------------------------------------------

def gaussian_probes(grid: Grid, centers=None, sigma: float | None = None) -> list[np.ndarray]:
    """Gaussian bumps exp(-(x-c)^2 / 2 sigma^2), decaying well inside the box.

    Defaults: centers at 0, +-L/4, +-L/2 and sigma = L/10.
    """
    L = grid.L
    if sigma is None:
        sigma = L / 10.0
    if centers is None:
        centers = [-L / 2, -L / 4, 0.0, L / 4, L / 2]
    for c in centers:
        if abs(c) > L / 2:
            raise ParameterError(f"probe center {c} outside |c| <= L/2")
    x = grid.points
    return [np.exp(-((x - c) ** 2) / (2.0 * sigma**2)).astype(complex) for c in centers]


_PROBE_MARGIN = 8  # rows next to the boundary excluded from probe residuals


def _probe_residual(defect_apply, scale: float, probes, margin: int = _PROBE_MARGIN) -> float:
    worst = 0.0
    for w in probes:
        r = defect_apply(w)
        num = np.linalg.norm(r[margin:-margin])
        worst = max(worst, num / (scale * np.linalg.norm(w)))
    return worst


def intertwining_residual(eta: np.ndarray, H: np.ndarray, probes) -> float:
    """max_w ||(eta H - H^dagger eta) w|| / (||eta H||_F ||w|| / sqrt(N)).

    Entries of the defect vector within a small boundary band are discarded:
    Dirichlet truncation gives differential eta matrices O(1) defects in the
    first/last rows that are irrelevant for decaying states.
    """
    if eta.shape != H.shape or eta.shape[0] != eta.shape[1]:
        raise DimensionError(f"shape mismatch: eta {eta.shape}, H {H.shape}")
    Hd = adjoint(H)
    scale = np.linalg.norm(eta @ H, "fro") / np.sqrt(H.shape[0])

    def defect(w):
        return eta @ (H @ w) - Hd @ (eta @ w)

    return _probe_residual(defect, scale, probes)


def hermiticity_indicators(eta: np.ndarray, probes) -> tuple[float, float]:
    """Probe-normalized sizes of (eta - eta^dagger) and (eta + eta^dagger).

    Returns (hermitian_defect, anti_hermitian_defect); a Hermitian operator
    has small first component, an anti-Hermitian one a small second.
    """
    ed = adjoint(eta)
    scale = np.linalg.norm(eta, "fro") / np.sqrt(eta.shape[0])
    herm = _probe_residual(lambda w: eta @ w - ed @ w, scale, probes)
    anti = _probe_residual(lambda w: eta @ w + ed @ w, scale, probes)
    return herm, anti


def eta_plus_minus(eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(eta + eta^dagger, eta - eta^dagger): the Hermitian part intertwines
    strictly, the anti-Hermitian part in the weak sense; their sum is 2 eta."""
    if eta.ndim != 2 or eta.shape[0] != eta.shape[1]:
        raise DimensionError(f"square matrix required, got shape {eta.shape}")
    ed = adjoint(eta)
    return eta + ed, eta - ed


# ---------------------------------------------------------------------------
# SUSY partner potentials and the second-order factorization
# ---------------------------------------------------------------------------

def susy_pair(g: Expr, k: float) -> tuple[CustomPotential, CustomPotential]:
    """Potential pair of the imaginary superpotential W = i g(x):
    V = -g^2 + k - i g' and its complex conjugate partner."""
    gp = expr.derive(g)
    base = expr.add(expr.neg(expr.power(g, 2)), expr.const(k))
    V = expr.sub(base, expr.mul(expr.const(1j), gp))
    Vp = expr.add(base, expr.mul(expr.const(1j), gp))
    return CustomPotential(V), CustomPotential(Vp)


@dataclass(frozen=True)
class FactorizationReport:
    probe_residual: float
    riccati_defect: float


def verify_factorization(
    grid: Grid,
    a: Expr,
    gamma: float,
    r: Expr,
    eta_matrix: np.ndarray,
    probes=None,
    accuracy: int = 2,
) -> FactorizationReport:
    """Check eta = -O^dagger O with O = D1 + (r - i a), O^dagger = -D1 + (r + i a).

    Returns the interior-probe residual of ||eta + O^dagger O|| together with
    the max pointwise defect of the Riccati condition
    r^2 - r' = a''/(2a) - (a'/(2a))^2 + gamma/(4 a^2).
    """
    x = grid.points
    av = expr.evaluate_on(a, x).real
    near_zero = np.abs(av) < 1e-12
    if gamma != 0.0 and near_zero.any():
        raise PoleError(
            f"a = {expr.to_source(a)} vanishes on the grid while gamma = {gamma} != 0"
        )
    ap = expr.evaluate_on(expr.derive(a), x).real
    app = expr.evaluate_on(expr.derive(expr.derive(a)), x).real
    rv = expr.evaluate_on(r, x).real
    rp = expr.evaluate_on(expr.derive(r), x).real

    with np.errstate(all="ignore"):
        rhs = app / (2 * av) - (ap / (2 * av)) ** 2 + gamma / (4 * av * av)
        defect = np.abs(rv * rv - rp - rhs)
    riccati = float(np.max(defect[~near_zero])) if (~near_zero).any() else float("nan")

    D1 = diff_matrix(grid, 1, accuracy)
    O = D1 + np.diag(rv - 1j * av)
    Od = -D1 + np.diag(rv + 1j * av)
    if probes is None:
        probes = gaussian_probes(grid)
    scale = np.linalg.norm(eta_matrix, "fro") / np.sqrt(grid.N)
    resid = _probe_residual(lambda w: eta_matrix @ w + Od @ (O @ w), scale, probes)
    return FactorizationReport(probe_residual=resid, riccati_defect=riccati)
