"""Numerical toolkit for eta-pseudo-Hermitian one-dimensional Hamiltonians.

Builds discretized non-Hermitian Hamiltonians (complex Scarf II family and
custom potentials, with optional imaginary gauge coupling), the metric
operators that intertwine them with their adjoints, dense complex spectra
with real/conjugate-pair classification against analytic levels, and
Crank-Nicolson evolution verifying the generalized continuity/conservation
law and eta-orthogonality.
"""

from .errors import (
    ConstraintError,
    DimensionError,
    NanAbortError,
    OddFunctionError,
    ParameterError,
    PoleError,
    SingularSystemError,
    SolverError,
    ToolkitError,
    ZeroPseudoNormError,
)
from .expr import DomainError, ParseError, derive, evaluate, evaluate_on, parse, to_source
from .grid import Grid, diff_matrix, make_grid
from .operators import (
    CustomPotential,
    FirstOrderEta,
    FirstOrderFamily,
    GaugeSpec,
    IdentityEta,
    MultiplicativeEta,
    ParityEta,
    ScarfII,
    SecondOrderEta,
    SpecialB1,
    adjoint,
    build_eta,
    build_hamiltonian,
    eta_plus_minus,
    gauge_weight,
    gaussian_probes,
    hermiticity_indicators,
    intertwining_residual,
    potential_on_grid,
    susy_pair,
    verify_factorization,
)
from .eigen import SpectrumReport, classify_spectrum, converged_bound_states, eig
from .inner import gram, operator_inner, parity_flip, pseudo_normalize, weighted_inner
from .evolve import EvolutionTrace, continuity_fields, gaussian_state, run, step_cn
from .models import (
    LevelSet,
    first_order_levels,
    reality_condition,
    scarf2_levels,
    scarf2_potential,
    scarf2_raw_potential,
    scarf2_strengths,
)

__version__ = "0.1.0"
