"""Singular points of profile curves and their cusp types.

A point of the profile curve is singular exactly where ``l`` vanishes.  The
type of a singular point ``p`` is read off the jet of ``l`` and of
``eta' = 2m`` at ``p``:

    l' eta' != 0                               -> 3/2-cusp
    l' != 0, eta' = 0, l'' eta'' - l' eta''' != 0 -> 5/2-cusp
    l' = 0, eta' l'' != 0                      -> 4/3-cusp
    l' = eta' = 0, eta'' l'' != 0              -> 5/3-cusp

and the curve is a front at ``p`` iff ``eta'(p) != 0``.  An independent
check classifies the plane-curve jet of gamma itself, obtained by finite
differences of the traced curve.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import expr as ex
from .errors import RootFindingError
from .profile import ProblemSpec, _frame, base_integrals

log = logging.getLogger(__name__)

ZERO_REL = 1e-8
# values within this factor above the zero threshold are too close to call
AMBIGUITY_FACTOR = 1e3


class CuspClass(enum.Enum):
    THREE_TWO = "3/2-cusp"
    FIVE_TWO = "5/2-cusp"
    FOUR_THREE = "4/3-cusp"
    FIVE_THREE = "5/3-cusp"
    DEGENERATE = "degenerate"

    @property
    def is_front_type(self) -> bool | None:
        if self in (CuspClass.THREE_TWO, CuspClass.FOUR_THREE):
            return True
        if self in (CuspClass.FIVE_TWO, CuspClass.FIVE_THREE):
            return False
        return None

    @property
    def edge_label(self) -> str:
        if self is CuspClass.DEGENERATE:
            return "unclassified singular ring"
        return self.value.replace("-cusp", "-cuspidal edge")


def zero_tol(scale: float) -> float:
    return ZERO_REL * (1.0 + abs(scale))


class _Z(enum.Enum):
    ZERO = 0
    NONZERO = 1
    UNSURE = 2


def _state(value: float, tol: float) -> _Z:
    a = abs(value)
    if a <= tol:
        return _Z.ZERO
    if a <= AMBIGUITY_FACTOR * tol:
        return _Z.UNSURE
    return _Z.NONZERO


@lru_cache(maxsize=256)
def _derivative(e: ex.Expr, order: int) -> ex.Expr:
    return ex.derivative(e, order)


def _d(e: ex.Expr, order: int, t):
    return ex.evaluate(_derivative(e, order), t)


# ---------------------------------------------------------------------------
# locating zeros of l
# ---------------------------------------------------------------------------

def _safe_newton(f, df, a: float, b: float, maxiter: int = 200) -> float:
    """Root of ``f`` in a sign-change bracket [a, b], Newton with bisection guard."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise RootFindingError("no sign change", (a, b))
    if fa > 0:
        a, b = b, a  # keep f(a) < 0 < f(b)
    x = 0.5 * (a + b)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            a = x
        else:
            b = x
        width = abs(b - a)
        if width <= 4.0 * np.finfo(float).eps * (1.0 + abs(x)):
            return x
        dfx = df(x)
        step_ok = False
        if dfx != 0.0 and math.isfinite(dfx):
            xn = x - fx / dfx
            lo, hi = min(a, b), max(a, b)
            if lo < xn < hi and abs(xn - x) < 0.5 * width:
                step_ok = True
                if xn == x:
                    return x
                x = xn
        if not step_ok:
            x = 0.5 * (a + b)
    raise RootFindingError("root refinement did not converge", (min(a, b), max(a, b)))


def find_singular_points(spec: ProblemSpec, n_scan: int | None = None) -> list[float]:
    """All zeros of ``l`` in the domain, sorted.

    Odd-order zeros are bracketed by a sign-change scan; even-order zeros
    show up as local minima of |l| and are refined as critical points of l.
    """
    t0, t1 = spec.t_min, spec.t_max
    if n_scan is None:
        n_scan = max(4097, int(1000 * (t1 - t0)) + 1)
    grid = np.linspace(t0, t1, n_scan)
    lv = ex.evaluate(spec.l, grid)
    al = np.abs(lv)

    def l(t):
        return ex.evaluate(spec.l, t)

    def dl(t):
        return _d(spec.l, 1, t)

    def ddl(t):
        return _d(spec.l, 2, t)

    candidates: list[float] = []
    for i in np.flatnonzero(lv == 0.0):
        candidates.append(float(grid[i]))
    for i in np.flatnonzero(lv[:-1] * lv[1:] < 0):
        candidates.append(_safe_newton(l, dl, float(grid[i]), float(grid[i + 1])))

    # local minima of |l| without a sign change: extrema of l
    for i in range(n_scan):
        left = al[i - 1] if i > 0 else np.inf
        right = al[i + 1] if i < n_scan - 1 else np.inf
        if not (al[i] <= left and al[i] <= right) or al[i] == 0.0:
            continue
        lo = float(grid[max(i - 1, 0)])
        hi = float(grid[min(i + 1, n_scan - 1)])
        if i in (0, n_scan - 1):
            t = float(grid[i])
            if abs(l(t)) <= zero_tol(abs(dl(t)) + abs(ddl(t))):
                candidates.append(t)
            continue
        try:
            dlo, dhi = dl(lo), dl(hi)
        except ArithmeticError:
            continue
        if dlo * dhi > 0:
            continue
        t = _safe_newton(dl, ddl, lo, hi)
        if abs(l(t)) <= zero_tol(abs(ddl(t))):
            candidates.append(t)

    roots: list[float] = []
    for t in sorted(candidates):
        t = min(max(t, t0), t1)
        if roots and abs(t - roots[-1]) <= max(zero_tol(abs(t)), 1e-12 * (t1 - t0)):
            continue
        roots.append(t)
    return roots


# ---------------------------------------------------------------------------
# classification from the jets of l and m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet:
    """Derivatives at a singular point: l', l'', eta', eta'', eta'''."""

    l1: float
    l2: float
    eta1: float
    eta2: float
    eta3: float

    @property
    def scale(self) -> float:
        return max(abs(self.l1), abs(self.l2), abs(self.eta1), abs(self.eta2), abs(self.eta3))

    def as_dict(self) -> dict[str, float]:
        return {"l1": self.l1, "l2": self.l2, "eta1": self.eta1,
                "eta2": self.eta2, "eta3": self.eta3}


@dataclass(frozen=True)
class SingularPointReport:
    p: float
    jet: Jet
    cusp_class: CuspClass
    is_front: bool
    surface_label: str
    warning: str | None = None

    @property
    def front_label(self) -> str:
        return "front" if self.is_front else "frontal not front"

    def as_dict(self) -> dict:
        return {
            "t": self.p,
            "jet": self.jet.as_dict(),
            "cusp": self.cusp_class.value,
            "front": self.is_front,
            "frontal": True,
            "surface": self.surface_label,
            "warning": self.warning,
        }


def jet_at(spec: ProblemSpec, p: float) -> Jet:
    return Jet(
        l1=_d(spec.l, 1, p),
        l2=_d(spec.l, 2, p),
        eta1=2.0 * ex.evaluate(spec.m, p),
        eta2=2.0 * _d(spec.m, 1, p),
        eta3=2.0 * _d(spec.m, 2, p),
    )


def classify_from_jet(jet: Jet) -> tuple[CuspClass, str | None]:
    """Decision tree on an exact jet; returns (class, warning)."""
    tol = zero_tol(jet.scale)
    l1 = _state(jet.l1, tol)
    l2 = _state(jet.l2, tol)
    e1 = _state(jet.eta1, tol)
    e2 = _state(jet.eta2, tol)
    unsure = None
    cls = CuspClass.DEGENERATE
    if l1 is _Z.NONZERO:
        if e1 is _Z.NONZERO:
            cls = CuspClass.THREE_TWO
        elif e1 is _Z.ZERO:
            q = _state(jet.l2 * jet.eta2 - jet.l1 * jet.eta3, tol * (1.0 + jet.scale))
            if q is _Z.NONZERO:
                cls = CuspClass.FIVE_TWO
            elif q is _Z.UNSURE:
                unsure = "l''eta'' - l'eta''' is near zero"
        else:
            unsure = "eta' is near zero"
    elif l1 is _Z.ZERO:
        if l2 is _Z.NONZERO:
            if e1 is _Z.NONZERO:
                cls = CuspClass.FOUR_THREE
            elif e1 is _Z.ZERO:
                if e2 is _Z.NONZERO:
                    cls = CuspClass.FIVE_THREE
                elif e2 is _Z.UNSURE:
                    unsure = "eta'' is near zero"
            else:
                unsure = "eta' is near zero"
        elif l2 is _Z.UNSURE:
            unsure = "l'' is near zero"
    else:
        unsure = "l' is near zero"
    if unsure is not None:
        return CuspClass.DEGENERATE, f"near-threshold jet, not classified: {unsure}"
    return cls, None


def classify(spec: ProblemSpec, p: float) -> SingularPointReport:
    """Cusp type and front/frontal status of the singular point ``p``."""
    lp = ex.evaluate(spec.l, p)
    jet = jet_at(spec, p)
    if abs(lp) > zero_tol(abs(jet.l1) + abs(jet.l2)):
        raise ValueError(f"t={p!r} is not a singular point: l={lp!r}")
    cls, warning = classify_from_jet(jet)
    is_front = abs(jet.eta1) > zero_tol(jet.scale)
    if warning:
        log.warning("t=%r: %s", p, warning)
    return SingularPointReport(p, jet, cls, is_front, cls.edge_label, warning)


def singular_points(spec: ProblemSpec, n_scan: int | None = None) -> list[SingularPointReport]:
    return [classify(spec, p) for p in find_singular_points(spec, n_scan)]


# ---------------------------------------------------------------------------
# classification from the jet of the plane curve itself
# ---------------------------------------------------------------------------

def _det(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class JetVerdict:
    cusp_class: CuspClass
    ambiguous: bool = False
    note: str = ""
    values: dict = field(default_factory=dict)


def jet_verdict(d2, d3, d4, d5, tol: float = ZERO_REL) -> JetVerdict:
    """Classify a curve germ with vanishing first derivative from its jet.

    ``d2..d5`` are the 2nd to 5th derivative vectors at the point.  A vector
    counts as zero when its norm is below ``tol`` times the largest jet
    norm; a determinant counts as zero when the sine of the angle between
    its columns is below ``tol``.
    """
    a2, a3, a4, a5 = (np.asarray(v, dtype=float) for v in (d2, d3, d4, d5))
    scale = max(float(np.linalg.norm(v)) for v in (a2, a3, a4, a5))
    if scale == 0.0:
        return JetVerdict(CuspClass.DEGENERATE, note="zero jet")
    values: dict[str, float] = {"scale": scale}

    def vec_state(v) -> _Z:
        return _state(float(np.linalg.norm(v)) / scale, tol)

    def det_state(name: str, a, b) -> _Z:
        if vec_state(a) is _Z.ZERO or vec_state(b) is _Z.ZERO:
            values[name] = 0.0
            return _Z.ZERO
        sine = _det(a, b) / (float(np.linalg.norm(a)) * float(np.linalg.norm(b)))
        values[name] = sine
        return _state(sine, tol)

    def unsure(what: str) -> JetVerdict:
        return JetVerdict(CuspClass.DEGENERATE, True, f"near-threshold: {what}", values)

    s23 = det_state("sin23", a2, a3)
    if s23 is _Z.NONZERO:
        return JetVerdict(CuspClass.THREE_TWO, values=values)
    if s23 is _Z.UNSURE:
        return unsure("det(a'', a''') is neither clearly zero nor clearly nonzero")

    s2 = vec_state(a2)
    if s2 is _Z.NONZERO:
        # det(a'', a''') = 0 with a'' != 0, so a''' = k a''
        k = float(a3 @ a2) / float(a2 @ a2)
        values["k"] = k
        s = det_state("sin25", a2, 3.0 * a5 - 10.0 * k * a4)
        if s is _Z.NONZERO:
            return JetVerdict(CuspClass.FIVE_TWO, values=values)
        if s is _Z.UNSURE:
            return unsure("det(a'', 3a^(5) - 10k a^(4))")
        return JetVerdict(CuspClass.DEGENERATE, note="5-jet does not determine the germ",
                          values=values)
    if s2 is _Z.UNSURE:
        return unsure("|a''|")

    s34 = det_state("sin34", a3, a4)
    if s34 is _Z.NONZERO:
        return JetVerdict(CuspClass.FOUR_THREE, values=values)
    if s34 is _Z.UNSURE:
        return unsure("det(a''', a^(4))")
    s35 = det_state("sin35", a3, a5)
    if s35 is _Z.NONZERO:
        return JetVerdict(CuspClass.FIVE_THREE, values=values)
    if s35 is _Z.UNSURE:
        return unsure("det(a''', a^(5))")
    return JetVerdict(CuspClass.DEGENERATE, note="5-jet does not determine the germ",
                      values=values)


def classify_jet(d2, d3, d4, d5, tol: float = ZERO_REL) -> CuspClass:
    return jet_verdict(d2, d3, d4, d5, tol).cusp_class


# central differences of orders 1..4, all O(h^2): offsets -2..2
_STENCILS = {
    1: np.array([0.0, -0.5, 0.0, 0.5, 0.0]),
    2: np.array([0.0, 1.0, -2.0, 1.0, 0.0]),
    3: np.array([-0.5, 1.0, 0.0, -1.0, 0.5]),
    4: np.array([1.0, -4.0, 6.0, -4.0, 1.0]),
}


def _richardson(values_by_level: list[np.ndarray]) -> np.ndarray:
    """Eliminate h^2 and h^4 terms from estimates at h, h/2, h/4."""
    d_h, d_h2, d_h4 = values_by_level
    r1 = (4.0 * d_h2 - d_h) / 3.0
    r2 = (4.0 * d_h4 - d_h2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def curve_jet(spec: ProblemSpec, p: float, h: float = 1e-2,
              tol: float = 1e-13) -> list[np.ndarray]:
    """Finite-difference jet (2nd..5th derivative vectors) of gamma at ``p``.

    Differentiates the sampled velocity gamma' = l e, which is available
    pointwise, so the 5th derivative of gamma needs only 4th differences.
    """
    t_lo = min(spec.t_min, p - 2.0 * h)
    t_hi = max(spec.t_max, p + 2.0 * h)
    eta, F, G = base_integrals(spec.l, spec.m, min(t_lo, 0.0), max(t_hi, 0.0), tol)

    def velocity(t):
        _, _, _, _, c, s = _frame(spec, eta, F, G, t)
        lv = ex.evaluate(spec.l, t)
        return np.column_stack([lv * c, lv * s])

    derivs = {k: [] for k in _STENCILS}
    for step in (h, h / 2.0, h / 4.0):
        g = velocity(p + step * np.arange(-2, 3))
        for k, w in _STENCILS.items():
            derivs[k].append(w @ g / step**k)
    return [_richardson(derivs[k]) for k in (1, 2, 3, 4)]


@dataclass(frozen=True)
class CrossCheck:
    p: float
    from_speed: CuspClass
    from_curve: JetVerdict
    agree: bool


def cross_check_details(spec: ProblemSpec, p: float, h: float = 1e-2,
                        jet_tol: float = 1e-5) -> CrossCheck:
    report = classify(spec, p)
    verdict = jet_verdict(*curve_jet(spec, p, h), tol=jet_tol)
    agree = verdict.cusp_class is report.cusp_class
    if not agree:
        log.warning(
            "cusp classes disagree at t=%r: jet of l, m gives %s, jet of gamma gives %s "
            "(%s; %s)", p, report.cusp_class.value, verdict.cusp_class.value,
            verdict.note or "no note", verdict.values,
        )
    return CrossCheck(p, report.cusp_class, verdict, agree)


def cross_check(spec: ProblemSpec, p: float, h: float = 1e-2) -> bool:
    """Does the finite-difference jet of gamma give the same class as ``classify``?"""
    return cross_check_details(spec, p, h).agree
