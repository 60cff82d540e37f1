"""Exception hierarchy shared by all modules."""


class FpsDaeError(Exception):
    """Base class for every error raised by this package."""


class UsageError(FpsDaeError, ValueError):
    """Inconsistent arguments (order mismatch, bad index, ...)."""


class UnsupportedInExactMode(FpsDaeError):
    """A transcendental primitive was requested in rational mode."""


class SingularEvaluationError(FpsDaeError, ArithmeticError):
    """Division by zero or log of zero inside the evaluated map."""


class ParseError(FpsDaeError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class ValidationError(FpsDaeError, ValueError):
    """Expression is syntactically fine but inconsistent with (n, d, field)."""


class HypothesisError(FpsDaeError):
    """The base jet does not satisfy the hypotheses required by the solver."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateIndicialError(HypothesisError):
    """The indicial polynomial vanishes identically."""


class OverdeterminedError(HypothesisError):
    """r > d: the recursion is not defined for overdetermined systems."""


class InfeasibleRootError(FpsDaeError):
    """The range condition failed at an integer root of the indicial polynomial."""

    def __init__(self, message, root=None, witness=None, record=None):
        super().__init__(message)
        self.root = root
        self.witness = witness
        self.record = record
