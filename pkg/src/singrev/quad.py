"""Adaptive Gauss-Kronrod quadrature with dense cumulative output.

``integrate`` is a global adaptive G7/K15 scheme.  ``cumulative`` runs the
same subdivision over a whole domain, keeps every accepted panel, and stores
on each panel the Legendre coefficients of the antiderivative of the
degree-14 interpolant through the Kronrod nodes.  The interpolatory rule on
those nodes *is* K15, so panel sums and dense values agree exactly.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from .errors import DomainError, IntegrationError

Integrand = Callable[[np.ndarray], np.ndarray]

DEFAULT_TOL = 1e-10
MAX_PANELS = 20000

_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
# Gauss nodes are the odd-indexed Kronrod nodes
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]
# values at nodes -> Legendre coefficients of the interpolant
_TO_LEGENDRE = np.linalg.inv(legendre.legvander(_XK, 14))


@dataclass
class _Panel:
    a: float
    b: float
    values: np.ndarray
    integral: float
    error: float


def _sample(f: Integrand, a: float, b: float) -> np.ndarray:
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * _XK
    with np.errstate(all="ignore"):
        values = np.asarray(f(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape).astype(float)
    if not np.all(np.isfinite(values)):
        bad = float(nodes[np.argmax(~np.isfinite(values))])
        raise IntegrationError(f"non-finite integrand sample at t={bad!r}", (a, b))
    return values


def _panel(f: Integrand, a: float, b: float, dense: bool) -> _Panel:
    values = _sample(f, a, b)
    half = 0.5 * (b - a)
    kronrod = half * float(_WK @ values)
    gauss = half * float(_WG @ values)
    error = abs(kronrod - gauss)
    if dense:
        # the interpolant must resolve f pointwise, not just its integral
        coef = _TO_LEGENDRE @ values
        error = max(error, abs(half) * float(np.abs(coef[-3:]).sum()))
    return _Panel(a, b, values, kronrod, error)


def _adapt(f: Integrand, breaks: list[float], tol: float, dense: bool,
           max_panels: int) -> list[_Panel]:
    panels = [_panel(f, a, b, dense) for a, b in zip(breaks[:-1], breaks[1:]) if b > a]
    heap = [(-p.error, i) for i, p in enumerate(panels)]
    heapq.heapify(heap)
    live = {i: p for i, p in enumerate(panels)}
    next_id = len(panels)
    total = sum(p.integral for p in panels)
    err = sum(p.error for p in panels)
    # refresh running sums periodically to avoid drift
    while err > tol * (1.0 + abs(total)):
        if len(live) >= max_panels:
            worst = live[heap[0][1]]
            raise IntegrationError(
                f"subdivision limit {max_panels} reached, error estimate {err:.3g}",
                (worst.a, worst.b),
            )
        _, idx = heapq.heappop(heap)
        p = live.pop(idx)
        mid = 0.5 * (p.a + p.b)
        if not (p.a < mid < p.b):
            raise IntegrationError("panel cannot be bisected further", (p.a, p.b))
        kids = (_panel(f, p.a, mid, dense), _panel(f, mid, p.b, dense))
        for kid in kids:
            live[next_id] = kid
            heapq.heappush(heap, (-kid.error, next_id))
            next_id += 1
        total += kids[0].integral + kids[1].integral - p.integral
        err += kids[0].error + kids[1].error - p.error
        if next_id % 256 == 0:
            total = sum(q.integral for q in live.values())
            err = sum(q.error for q in live.values())
    return sorted(live.values(), key=lambda q: q.a)


def integrate(f: Integrand, a: float, b: float, tol: float = DEFAULT_TOL,
              max_panels: int = MAX_PANELS) -> float:
    """Integrate the vectorised function ``f`` over [a, b].

    The estimated error is at most ``tol * (1 + |I|)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    panels = _adapt(f, [a, b], tol, dense=False, max_panels=max_panels)
    return sign * float(sum(p.integral for p in panels))


class CumulativeIntegral:
    """Dense representation of ``t -> integral of f from 0 to t``.

    Immutable once built.  Queries accept floats or arrays; ``derivative``
    returns the panel interpolant of the integrand itself.
    """

    def __init__(self, breakpoints: np.ndarray, offsets: np.ndarray,
                 antideriv: np.ndarray, interp: np.ndarray, tol: float):
        self.breakpoints = breakpoints
        self.offsets = offsets        # integral from 0 to each left breakpoint
        self._antideriv = antideriv   # (n_panels, 16) Legendre coefs, zero at s=-1
        self._interp = interp         # (n_panels, 15) Legendre coefs of f
        self.tol = tol
        self.order = interp.shape[1] - 1
        for arr in (breakpoints, offsets, antideriv, interp):
            arr.flags.writeable = False

    @property
    def t_min(self) -> float:
        return float(self.breakpoints[0])

    @property
    def t_max(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def values(self) -> np.ndarray:
        """Accumulated integral at every breakpoint."""
        last = self.offsets[-1] + self._panel_integral(len(self.offsets) - 1)
        return np.append(self.offsets, last)

    def _panel_integral(self, i: int) -> float:
        half = 0.5 * (self.breakpoints[i + 1] - self.breakpoints[i])
        return half * float(legendre.legval(1.0, self._antideriv[i]))

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        span = hi - lo
        if np.any(t < lo - 1e-12 * span) or np.any(t > hi + 1e-12 * span):
            raise DomainError(f"query outside [{lo!r}, {hi!r}]")
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1,
                      0, len(self.breakpoints) - 2)
        a = self.breakpoints[idx]
        b = self.breakpoints[idx + 1]
        s = np.clip((2.0 * t - a - b) / (b - a), -1.0, 1.0)
        return t, idx, s, 0.5 * (b - a)

    @staticmethod
    def _legendre_rows(coef: np.ndarray, s: np.ndarray) -> np.ndarray:
        # three-term recurrence, vectorised over query points
        p_prev = np.ones_like(s)
        out = coef[..., 0] * p_prev
        if coef.shape[-1] == 1:
            return out
        p = s.copy()
        out = out + coef[..., 1] * p
        for n in range(1, coef.shape[-1] - 1):
            p_next = ((2 * n + 1) * s * p - n * p_prev) / (n + 1)
            out = out + coef[..., n + 1] * p_next
            p_prev, p = p, p_next
        return out

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        _, idx, s, half = self._locate(np.atleast_1d(t))
        out = self.offsets[idx] + half * self._legendre_rows(self._antideriv[idx], s)
        # exact at left breakpoints, so the anchor gives 0 without rounding
        out = np.where(s == -1.0, self.offsets[idx], out)
        return float(out[0]) if scalar else out

    def derivative(self, t):
        scalar = np.ndim(t) == 0
        _, idx, s, _ = self._locate(np.atleast_1d(t))
        out = self._legendre_rows(self._interp[idx], s)
        return float(out[0]) if scalar else out


def cumulative(f: Integrand, t_min: float, t_max: float, tol: float = DEFAULT_TOL,
               max_panels: int = MAX_PANELS) -> CumulativeIntegral:
    """Build the dense integral of ``f`` anchored at 0 over [t_min, t_max]."""
    t_min, t_max = float(t_min), float(t_max)
    if not t_min <= 0.0 <= t_max:
        raise DomainError(f"domain [{t_min!r}, {t_max!r}] must contain the anchor 0")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_min == t_max:
        raise DomainError("empty domain")
    breaks = sorted({t_min, 0.0, t_max})
    panels = _adapt(f, breaks, tol, dense=True, max_panels=max_panels)
    bp = np.array([p.a for p in panels] + [panels[-1].b])
    interp = np.array([_TO_LEGENDRE @ p.values for p in panels])
    antideriv = np.array([legendre.legint(c, lbnd=-1.0) for c in interp])
    integrals = np.array([p.integral for p in panels])
    offsets = np.concatenate(([0.0], np.cumsum(integrals)[:-1]))
    anchor = int(np.searchsorted(bp, 0.0))
    offsets = offsets - offsets[anchor]
    return CumulativeIntegral(bp, offsets, antideriv, interp, tol)
