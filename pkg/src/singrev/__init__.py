"""Singular surfaces of revolution with prescribed, possibly unbounded, mean curvature.

Given ``l`` and ``m`` with ``H = m / l``, the profile curve in the upper
half plane is built from ``eta = int 2m``, ``F = int l sin(eta)`` and
``G = int l cos(eta)``; zeros of ``l`` are its singular points.
"""
from .errors import (DomainError, EvaluationError, IntegrationError, ParseError,
                     PeriodicityAuditError, RootFindingError, SingrevError, YCollapseError)
from .expr import derivative, evaluate, parse, to_text
from .periodicity import PeriodicityReport, check, periodic_constants
from .profile import CurveSample, ProblemSpec, ProfileTrace, profile_point, trace
from .quad import CumulativeIntegral, cumulative, integrate
from .singularity import (CuspClass, SingularPointReport, classify, cross_check,
                          find_singular_points, singular_points)
from .surface import Mesh, revolve, to_obj

__all__ = [
    "CumulativeIntegral", "CurveSample", "CuspClass", "DomainError", "EvaluationError",
    "IntegrationError", "Mesh", "ParseError", "PeriodicityAuditError", "PeriodicityReport",
    "ProblemSpec", "ProfileTrace", "RootFindingError", "SingrevError", "SingularPointReport",
    "YCollapseError", "check", "classify", "cross_check", "cumulative", "derivative",
    "evaluate", "find_singular_points", "integrate", "parse", "periodic_constants",
    "profile_point", "revolve", "singular_points", "to_obj", "to_text", "trace",
]
