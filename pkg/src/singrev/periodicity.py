"""Periodicity of profile curves when ``l`` and ``m`` share a period ``L``.

With ``eta(u + L) = eta(u) + eta(L)`` the integrals obey the shift laws

    F(t + L) = F(L) + sin(eta_L) G(t) + cos(eta_L) F(t)
    G(t + L) = G(L) + cos(eta_L) G(t) - sin(eta_L) F(t)

so ``y(t + L) = y(t)`` and ``x'(t + L) = x'(t)`` reduce to conditions on
``(c1, c2)``.  When ``1 - cos(eta_L) != 0`` (generic branch) the constants
must be

    c1 = (F_L (1 - cos eta_L) + G_L sin eta_L) / (2 (1 - cos eta_L))
    c2 = (G_L (1 - cos eta_L) - F_L sin eta_L) / (2 (1 - cos eta_L))

and when ``1 - cos(eta_L) = 0`` (resonant branch) the curve is periodic iff
``F_L = G_L = 0``, whatever the constants.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import PeriodicityAuditError, YCollapseError
from .profile import ProblemSpec, _frame, base_integrals, prepare
from .quad import DEFAULT_TOL

log = logging.getLogger(__name__)

BRANCH_TOL = 1e-9
# near-resonant band in which both branches are evaluated
AMBIGUOUS_BAND = 1e-6
AUDIT_TOL = 1e-9


class Branch(enum.Enum):
    GENERIC = "generic"
    RESONANT = "resonant"


def period_tol(F_L: float, G_L: float) -> float:
    return 1e-8 * (1.0 + abs(F_L) + abs(G_L))


@dataclass
class PeriodicityReport:
    L: float
    eta_L: float
    F_L: float
    G_L: float
    branch: Branch
    phi0: float
    residual: float
    periodic: bool
    T: float | None = None
    constants: tuple[float, float] | None = None
    constants_residual: float | None = None
    halfangle_residual: float | None = None
    trace_defect: float | None = None
    shift_defect: float | None = None
    ambiguous: bool = False
    flags: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "L": self.L,
            "eta_L": self.eta_L,
            "F_L": self.F_L,
            "G_L": self.G_L,
            "branch": self.branch.value,
            "phi0": self.phi0,
            "residual": self.residual,
            "periodic": self.periodic,
            "T": self.T,
            "periodic_constants": list(self.constants) if self.constants else None,
            "constants_residual": self.constants_residual,
            "halfangle_residual": self.halfangle_residual,
            "trace_defect": self.trace_defect,
            "shift_defect": self.shift_defect,
            "ambiguous": self.ambiguous,
            "flags": list(self.flags),
        }


def audit_period(l: ex.Expr, m: ex.Expr, L: float, n: int = 50, seed: int = 0,
                 span: tuple[float, float] | None = None) -> None:
    """Raise PeriodicityAuditError unless l and m repeat with period ``L``."""
    if not L > 0:
        raise PeriodicityAuditError(f"period must be positive, got {L!r}")
    rng = np.random.default_rng(seed)
    lo, hi = span if span is not None else (0.0, L)
    t = rng.uniform(lo, hi, size=n)
    for name, e in (("l", l), ("m", m)):
        a = ex.evaluate(e, t)
        b = ex.evaluate(e, t + L)
        worst = np.abs(b - a) / (1.0 + np.abs(a))
        i = int(np.argmax(worst))
        if worst[i] > AUDIT_TOL:
            raise PeriodicityAuditError(
                f"{name} is not {L!r}-periodic: {name}({t[i]!r}+L) - {name}({t[i]!r}) "
                f"= {b[i] - a[i]!r}"
            )


def constants_from_integrals(eta_L: float, F_L: float, G_L: float) -> tuple[float, float]:
    """The unique (c1, c2) making the curve L-periodic in the generic branch."""
    one_minus = 1.0 - math.cos(eta_L)
    s = math.sin(eta_L)
    c1 = (F_L * one_minus + G_L * s) / (2.0 * one_minus)
    c2 = (G_L * one_minus - F_L * s) / (2.0 * one_minus)
    return c1, c2


def condition_determinant(phi0: float, eta_L: float, F_L: float, G_L: float) -> float:
    """det[[cos phi0, A], [sin phi0, -B]] with (A, B) numerators of c1, c2.

    Unchanged up to sign when phi0 moves by pi, so the sign of l(0) does
    not matter.
    """
    one_minus = 1.0 - math.cos(eta_L)
    s = math.sin(eta_L)
    A = F_L * one_minus + G_L * s
    B = G_L * one_minus - F_L * s
    return -math.cos(phi0) * B - math.sin(phi0) * A


def condition_halfangle(phi0: float, eta_L: float, F_L: float, G_L: float) -> float:
    """cos(phi0 + eta_L/2) F_L - sin(phi0 + eta_L/2) G_L."""
    a = phi0 + 0.5 * eta_L
    return math.cos(a) * F_L - math.sin(a) * G_L


def shift_law_defects(eta, F, G, L: float, n: int = 10, seed: int = 1) -> dict[str, float]:
    """Max violation of the eta, F and G shift laws at ``n`` random points of [0, L]."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, L, size=n)
    eL, FL, GL = eta(L), F(L), G(L)
    se, ce = math.sin(eL), math.cos(eL)
    d_eta = np.abs(eta(u + L) - eta(u) - eL)
    d_F = np.abs(F(u + L) - (FL + se * G(u) + ce * F(u)))
    d_G = np.abs(G(u + L) - (GL + ce * G(u) - se * F(u)))
    return {"eta": float(d_eta.max()), "F": float(d_F.max()), "G": float(d_G.max())}


def _measure_translation(spec: ProblemSpec, L: float, tol: float,
                         n: int = 401) -> tuple[float, float]:
    """T = x(L) - x(0) and the sup-defect of the periodicity relations on [0, L]."""
    integrals = prepare(spec, tol, t_range=(0.0, 2.0 * L))
    T = integrals.x(L) - integrals.x(0.0)
    t = np.linspace(0.0, L, n)
    y0 = _frame(spec, integrals.eta, integrals.F, integrals.G, t)[3]
    y1 = _frame(spec, integrals.eta, integrals.F, integrals.G, t + L)[3]
    dx = integrals.x(t + L) - integrals.x(t) - T
    return float(T), float(max(np.abs(y1 - y0).max(), np.abs(dx).max()))


def check(spec: ProblemSpec, L: float | None = None, tol: float = DEFAULT_TOL,
          branch_tol: float = BRANCH_TOL) -> PeriodicityReport:
    """Decide whether the profile curve of ``spec`` is ``L``-periodic."""
    if L is None:
        L = spec.L
    if L is None:
        raise ValueError("no period given")
    L = float(L)
    audit_period(spec.l, spec.m, L)
    eta, F, G = base_integrals(spec.l, spec.m, 0.0, 2.0 * L, tol)
    eta_L, F_L, G_L = eta(L), F(L), G(L)
    shift = shift_law_defects(eta, F, G, L)
    one_minus = 1.0 - math.cos(eta_L)
    phi0 = spec.phi0
    ptol = period_tol(F_L, G_L)
    flags: list[str] = []
    if ex.evaluate(spec.l, 0.0) == 0.0:
        flags.append("l(0) = 0: phi(0) taken as the limiting frame direction (c1, -c2)")
    if max(shift.values()) > 1e-8:
        flags.append(f"shift laws violated by {max(shift.values()):.3g}")

    resonant_residual = max(abs(F_L), abs(G_L))
    resonant_ok = resonant_residual <= ptol

    def generic():
        cst = constants_from_integrals(eta_L, F_L, G_L)
        det = condition_determinant(phi0, eta_L, F_L, G_L)
        half = condition_halfangle(phi0, eta_L, F_L, G_L)
        # det = 2 sin(eta_L/2) * half
        residual = abs(det) / (2.0 * abs(math.sin(0.5 * eta_L)))
        c_res = math.hypot(spec.c1 - cst[0], spec.c2 - cst[1])
        ok = residual <= ptol and c_res <= ptol * (1.0 + math.hypot(*cst))
        return cst, residual, abs(half), c_res, ok

    ambiguous = False
    if abs(one_minus) <= branch_tol:
        branch = Branch.RESONANT
        residual, periodic = resonant_residual, resonant_ok
        report = PeriodicityReport(L, eta_L, F_L, G_L, branch, phi0, residual, periodic)
        if abs(one_minus) > 0.0 and abs(one_minus) <= AMBIGUOUS_BAND:
            ambiguous = generic()[4] != periodic
    else:
        branch = Branch.GENERIC
        cst, residual, half, c_res, periodic = generic()
        if abs(abs(half) - residual) > 1e-9 * (1.0 + residual):
            flags.append("determinant and half-angle forms disagree")
        report = PeriodicityReport(L, eta_L, F_L, G_L, branch, phi0, residual, periodic,
                                   constants=cst, constants_residual=c_res,
                                   halfangle_residual=half)
        if abs(one_minus) <= AMBIGUOUS_BAND:
            ambiguous = resonant_ok != periodic
    if ambiguous:
        flags.append("near-resonant: the two branches give different verdicts")
    report.ambiguous = ambiguous
    report.shift_defect = max(shift.values())
    report.flags = flags
    if periodic:
        try:
            report.T, report.trace_defect = _measure_translation(spec, L, tol)
        except YCollapseError as exc:
            flags.append(f"curve is inadmissible on [0, 2L]: {exc}")
    return report


def periodic_constants(l: ex.Expr, m: ex.Expr, L: float, tol: float = DEFAULT_TOL,
                       branch_tol: float = BRANCH_TOL,
                       check_admissible: bool = True) -> tuple[float, float] | None:
    """Constants (c1, c2) that make the profile curve L-periodic.

    Returns None in the resonant branch, where periodicity does not depend
    on the constants.  Raises YCollapseError if the resulting curve touches
    the axis on [0, L].
    """
    L = float(L)
    audit_period(l, m, L)
    eta, F, G = base_integrals(l, m, 0.0, L, tol)
    eta_L, F_L, G_L = eta(L), F(L), G(L)
    if abs(1.0 - math.cos(eta_L)) <= branch_tol:
        return None
    c1, c2 = constants_from_integrals(eta_L, F_L, G_L)
    if check_admissible:
        spec = ProblemSpec(l, m, c1, c2, 0.0, L)
        t = np.linspace(0.0, L, 2001)
        _frame(spec, eta, F, G, t)
    return c1, c2
