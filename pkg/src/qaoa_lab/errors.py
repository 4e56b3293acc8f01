"""Exception types raised by qaoa_lab."""


class QAOALabError(Exception):
    """Base class for all library errors."""


class ParameterMismatchError(QAOALabError, ValueError):
    """Angle vectors do not match the problem depth, or sizes are invalid."""


class NumericError(QAOALabError, ValueError):
    """Non-finite input where finite angles are required."""


class CapacityError(QAOALabError, ValueError):
    """The statevector oracle refuses a qubit count beyond its memory guard."""


class ConvergenceError(QAOALabError, RuntimeError):
    """A local search ran out of iterations.

    ``best`` holds the best-so-far result (an ``OptimizationResult``) when
    one is available.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class RootNotFoundError(QAOALabError, RuntimeError):
    """No sign change of the p=1 root equation was found."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SaddlePointError(QAOALabError, RuntimeError):
    """The Hessian at the seed is not negative definite."""


class FitError(QAOALabError, RuntimeError):
    """A curve or scaling fit could not be computed."""
