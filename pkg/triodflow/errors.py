"""Exceptions raised by triodflow.

Every error derives from :class:`TriodFlowError` and from the builtin that
matches its meaning, so ``except ValueError`` keeps working for callers that
do not know about this module.
"""


class TriodFlowError(Exception):
    """Base class for all triodflow errors."""


class ZeroVector(TriodFlowError, ValueError):
    """A direction was requested for the zero vector."""


class NotElliptic(TriodFlowError, ValueError):
    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class Degenerate(TriodFlowError, ValueError):
    """A curve lost regularity (|u_x| below the configured floor)."""


class DegenerateJunction(Degenerate):
    """Junction frame too close to tangential contact to solve for lambda."""


class SpecViolation(TriodFlowError, ValueError):
    """An argument violates a documented precondition."""


class GeometricObstruction(TriodFlowError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SolverFailure(TriodFlowError, RuntimeError):
    def __init__(self, detail):
        super().__init__(detail)
        self.detail = detail


class NoConvergence(TriodFlowError, RuntimeError):
    pass


class FitDegenerate(TriodFlowError, ValueError):
    pass


class ParseError(TriodFlowError, ValueError):
    def __init__(self, message, line=None, field=None):
        super().__init__(message)
        self.line = line
        self.field = field


class ConfigValidationError(TriodFlowError, ValueError):
    def __init__(self, field, message=None):
        super().__init__(message or f"invalid value for '{field}'")
        self.field = field


class IoError(TriodFlowError, OSError):
    pass
