"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(ToolkitError, ValueError):
    """A numeric argument violates a precondition (nonpositive width, N too small, ...)."""


class ConstraintError(ParameterError):
    """A potential-family parameter set violates its admissibility constraints."""


class OddFunctionError(ParameterError):
    """A gauge field nu(x) failed the odd-function check."""


class DimensionError(ToolkitError, ValueError):
    """Operands live on different grids or have mismatched shapes."""


class PoleError(ToolkitError, ArithmeticError):
    """A coefficient function vanishes where the construction divides by it."""


class ZeroPseudoNormError(ToolkitError, ArithmeticError):
    """A state is self-orthogonal under the active inner product."""

    def __init__(self, index: int, value: complex):
        super().__init__(
            f"state {index} has pseudo-norm {value!r} below threshold; "
            "cannot normalize (self-orthogonal state)"
        )
        self.index = index
        self.value = value


class SolverError(ToolkitError, RuntimeError):
    """The eigensolver failed to converge within its iteration budget."""

    def __init__(self, message: str, unconverged: tuple = ()):
        super().__init__(message)
        self.unconverged = tuple(unconverged)


class SingularSystemError(ToolkitError, ArithmeticError):
    """The implicit Crank-Nicolson system is numerically singular."""


class NanAbortError(ToolkitError, ArithmeticError):
    """Time evolution produced non-finite values; carries the last valid step."""

    def __init__(self, last_valid_step: int):
        super().__init__(f"non-finite state detected; last valid step = {last_valid_step}")
        self.last_valid_step = last_valid_step
