"""Exception types shared across the package.

Each carries a short machine-readable ``code`` that the command line tool
prints on failure.
"""
from __future__ import annotations


class SingrevError(Exception):
    code = "E_INTERNAL"


class ParseError(SingrevError, ValueError):
    code = "E_SYNTAX"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class EvaluationError(SingrevError, ArithmeticError):
    code = "E_EVAL"

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t={t!r}")
        self.t = t


class IntegrationError(SingrevError, ArithmeticError):
    """Quadrature failed: subdivision budget exhausted or bad integrand."""

    code = "E_QUAD"

    def __init__(self, message: str, interval: tuple[float, float] | None = None):
        if interval is not None:
            message = f"{message} (worst subinterval [{interval[0]!r}, {interval[1]!r}])"
        super().__init__(message)
        self.interval = interval


class YCollapseError(SingrevError, ArithmeticError):
    """The profile curve touches the rotation axis."""

    code = "E_YCOLLAPSE"

    def __init__(self, t: float, y: float):
        super().__init__(f"profile curve reaches the axis: y={y!r} at t={t!r}")
        self.t = t
        self.y = y


class RootFindingError(SingrevError, ArithmeticError):
    code = "E_ROOT"

    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} in [{bracket[0]!r}, {bracket[1]!r}]")
        self.bracket = bracket


class PeriodicityAuditError(SingrevError, ValueError):
    """l or m is not periodic with the declared period."""

    code = "E_PERIOD_AUDIT"


class DomainError(SingrevError, ValueError):
    code = "E_DOMAIN"
