"""Exception hierarchy; the CLI maps each class to a fixed exit code."""


class RankOneError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RankOneError, ValueError):
    """Invalid input: bad multiplicities, malformed parameters, out-of-domain t."""


class ExcludedParameterError(ValidationError):
    """Spectral parameter on the excluded lattice i*Z."""


class PoleError(RankOneError, ValueError):
    """Evaluation at a pole of a meromorphic function."""


class NumericalError(RankOneError, ArithmeticError):
    """A numerical procedure failed: step collapse, ill-conditioning, residual too large."""


class ConvergenceError(NumericalError):
    """A series or iteration hit its term cap before meeting its tolerance."""

    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail
