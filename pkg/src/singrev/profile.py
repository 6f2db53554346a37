"""Profile curves of revolution surfaces with prescribed mean curvature.

Given the speed ``l`` and the regularised product ``m = H*l`` the profile
curve is assembled from three integrals anchored at ``t = 0``::

    eta(t) = int_0^t 2 m
    F(t)   = int_0^t l sin(eta)
    G(t)   = int_0^t l cos(eta)

    y  = sqrt((F - c1)^2 + (G - c2)^2)
    x' = (F' (G - c2) - G' (F - c1)) / y,      x(0) = 0

The unit tangent direction is ``e = R(-eta) U / y`` with
``U = (-(F - c1), G - c2)``, so that ``gamma' = l e``.  ``e`` stays smooth
through zeros of ``l``; that is what makes the curve a frontal.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import expr as ex
from .errors import DomainError, YCollapseError
from .quad import DEFAULT_TOL, CumulativeIntegral, cumulative

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemSpec:
    """One surface family: speed ``l``, product ``m = H*l`` and constants."""

    l: ex.Expr
    m: ex.Expr
    c1: float
    c2: float
    t_min: float
    t_max: float
    H_display: ex.Expr | None = None
    L: float | None = None

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise DomainError(f"empty domain [{self.t_min!r}, {self.t_max!r}]")
        if not self.t_min <= 0.0 <= self.t_max:
            raise DomainError(
                f"domain [{self.t_min!r}, {self.t_max!r}] must contain t=0, "
                "where all integrals are anchored"
            )

    @classmethod
    def from_text(cls, l: str, m: str, c1: float, c2: float, t_min: float,
                  t_max: float, H: str | None = None, L: float | None = None):
        return cls(
            l=ex.parse(l), m=ex.parse(m), c1=float(c1), c2=float(c2),
            t_min=float(t_min), t_max=float(t_max),
            H_display=ex.parse(H) if H else None,
            L=None if L is None else float(L),
        )

    @property
    def y_floor(self) -> float:
        return 1e-12 * (1.0 + abs(self.c1) + abs(self.c2))

    @property
    def phi0(self) -> float:
        """Angle of the frame at t=0: the direction of (c1, -c2)."""
        return math.atan2(-self.c2, self.c1)

    def with_constants(self, c1: float, c2: float) -> "ProblemSpec":
        return ProblemSpec(self.l, self.m, float(c1), float(c2), self.t_min,
                           self.t_max, self.H_display, self.L)

    def with_domain(self, t_min: float, t_max: float) -> "ProblemSpec":
        return ProblemSpec(self.l, self.m, self.c1, self.c2, float(t_min),
                           float(t_max), self.H_display, self.L)


def H_consistency(spec: ProblemSpec, n: int = 50, seed: int = 0,
                  regular_tol: float = 1e-6) -> float:
    """Largest |H*l - m| at ``n`` random regular points (0.0 if H is absent)."""
    if spec.H_display is None:
        return 0.0
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for t in rng.uniform(spec.t_min, spec.t_max, size=20 * n):
        lv = ex.evaluate(spec.l, t)
        if abs(lv) < regular_tol:
            continue
        try:
            hv = ex.evaluate(spec.H_display, t)
        except ArithmeticError:
            continue
        mv = ex.evaluate(spec.m, t)
        worst = max(worst, abs(hv * lv - mv) / (1.0 + abs(mv)))
        checked += 1
        if checked == n:
            break
    return worst


@dataclass(frozen=True)
class CurveSample:
    t: float
    x: float
    y: float
    eta: float
    F: float
    G: float
    l_val: float
    u_vec: tuple[float, float]
    phi: float
    tangent_dir: tuple[float, float]
    frontal_normal: tuple[float, float]

    @property
    def point(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ProfileIntegrals:
    """The dense integrals shared by every sample of one spec."""

    spec: ProblemSpec
    eta: CumulativeIntegral
    F: CumulativeIntegral
    G: CumulativeIntegral
    x: CumulativeIntegral
    phi_unwrap: CumulativeIntegral
    tol: float

    @property
    def t_min(self) -> float:
        return self.eta.t_min

    @property
    def t_max(self) -> float:
        return self.eta.t_max


def base_integrals(l: ex.Expr, m: ex.Expr, t_min: float, t_max: float,
                   tol: float = DEFAULT_TOL):
    """eta, F and G over [t_min, t_max]; they do not depend on c1, c2."""
    eta = cumulative(lambda u: 2.0 * ex.evaluate(m, u), t_min, t_max, tol)
    F = cumulative(lambda u: ex.evaluate(l, u) * np.sin(eta(u)), t_min, t_max, tol)
    G = cumulative(lambda u: ex.evaluate(l, u) * np.cos(eta(u)), t_min, t_max, tol)
    return eta, F, G


def _frame(spec: ProblemSpec, eta, F, G, t):
    """Raw frame quantities at ``t`` (arrays), without phi unwrapping."""
    e = eta(t)
    Fv = F(t) - spec.c1
    Gv = G(t) - spec.c2
    y = np.hypot(Fv, Gv)
    bad = y <= spec.y_floor
    if np.any(bad):
        i = int(np.argmax(bad))
        raise YCollapseError(float(np.atleast_1d(t)[i]), float(np.atleast_1d(y)[i]))
    # R(-eta) U with U = (-(F-c1), G-c2)
    ce, se = np.cos(e), np.sin(e)
    ycos = -Fv * ce + Gv * se
    ysin = Fv * se + Gv * ce
    return e, Fv, Gv, y, ycos / y, ysin / y


def prepare(spec: ProblemSpec, tol: float = DEFAULT_TOL,
            t_range: tuple[float, float] | None = None) -> ProfileIntegrals:
    """Build the integrals for ``spec`` over its domain (or ``t_range``)."""
    t_min, t_max = t_range if t_range is not None else (spec.t_min, spec.t_max)
    eta, F, G = base_integrals(spec.l, spec.m, t_min, t_max, tol)

    def x_rate(u):
        lv = ex.evaluate(spec.l, u)
        _, Fv, Gv, y, _, _ = _frame(spec, eta, F, G, u)
        dF = lv * np.sin(eta(u))
        dG = lv * np.cos(eta(u))
        return (dF * Gv - dG * Fv) / y

    def phi_rate(u):
        # d/dt arg(U) - eta'
        lv = ex.evaluate(spec.l, u)
        _, _, _, y, cphi, _ = _frame(spec, eta, F, G, u)
        return lv * cphi / y - 2.0 * ex.evaluate(spec.m, u)

    x = cumulative(x_rate, t_min, t_max, tol)
    phi_unwrap = cumulative(phi_rate, t_min, t_max, tol)
    return ProfileIntegrals(spec, eta, F, G, x, phi_unwrap, tol)


def _evaluate(integrals: ProfileIntegrals, t: np.ndarray) -> dict[str, np.ndarray]:
    spec = integrals.spec
    t = np.asarray(t, dtype=float)
    e, Fv, Gv, y, cphi, sphi = _frame(spec, integrals.eta, integrals.F, integrals.G, t)
    raw = np.arctan2(sphi, cphi)
    guide = spec.phi0 + integrals.phi_unwrap(t)
    phi = raw + 2.0 * np.pi * np.round((guide - raw) / (2.0 * np.pi))
    return {
        "t": t,
        "x": integrals.x(t),
        "y": y,
        "eta": e,
        "F": Fv + spec.c1,
        "G": Gv + spec.c2,
        "l": ex.evaluate(spec.l, t),
        "u1": -Fv,
        "u2": Gv,
        "phi": phi,
        "cos_phi": cphi,
        "sin_phi": sphi,
    }


def _sample_from(d: dict[str, np.ndarray], i: int) -> CurveSample:
    c, s = float(d["cos_phi"][i]), float(d["sin_phi"][i])
    return CurveSample(
        t=float(d["t"][i]), x=float(d["x"][i]), y=float(d["y"][i]),
        eta=float(d["eta"][i]), F=float(d["F"][i]), G=float(d["G"][i]),
        l_val=float(d["l"][i]), u_vec=(float(d["u1"][i]), float(d["u2"][i])),
        phi=float(d["phi"][i]), tangent_dir=(c, s), frontal_normal=(-s, c),
    )


def profile_point(spec: ProblemSpec, t: float,
                  integrals: ProfileIntegrals | None = None) -> CurveSample:
    """Evaluate the profile curve and its frame at a single ``t``."""
    if integrals is None:
        integrals = prepare(spec)
    elif integrals.spec != spec:
        raise ValueError("integrals were prepared for a different spec")
    d = _evaluate(integrals, np.array([float(t)]))
    return _sample_from(d, 0)


class ProfileTrace:
    """Samples of a profile curve, stored column-wise.

    Indexing yields ``CurveSample`` objects; the numpy columns (``t``, ``x``,
    ``y``, ``phi``, ...) are available as attributes.
    """

    def __init__(self, spec: ProblemSpec, integrals: ProfileIntegrals,
                 columns: dict[str, np.ndarray]):
        self.spec = spec
        self.integrals = integrals
        self._cols = columns
        for arr in columns.values():
            arr.flags.writeable = False

    def __len__(self) -> int:
        return len(self._cols["t"])

    def __getitem__(self, i: int) -> CurveSample:
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return _sample_from(self._cols, i)

    def __iter__(self) -> Iterator[CurveSample]:
        return (self[i] for i in range(len(self)))

    def __getattr__(self, name: str) -> np.ndarray:
        cols = self.__dict__.get("_cols", {})
        if name in cols:
            return cols[name]
        raise AttributeError(name)

    @property
    def step(self) -> float:
        return float(self._cols["t"][1] - self._cols["t"][0])

    @property
    def tangent(self) -> np.ndarray:
        return np.column_stack([self._cols["cos_phi"], self._cols["sin_phi"]])

    @property
    def normal(self) -> np.ndarray:
        return np.column_stack([-self._cols["sin_phi"], self._cols["cos_phi"]])

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self._cols["x"], self._cols["y"]])


def trace(spec: ProblemSpec, n_samples: int, tol: float = DEFAULT_TOL,
          integrals: ProfileIntegrals | None = None) -> ProfileTrace:
    """Sample the profile curve uniformly in ``t`` over the domain of ``spec``."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if integrals is None:
        integrals = prepare(spec, tol)
    t = np.linspace(spec.t_min, spec.t_max, int(n_samples))
    return ProfileTrace(spec, integrals, _evaluate(integrals, t))


def phi_rate(sample: CurveSample, spec: ProblemSpec) -> float:
    """phi' from eta' = 2m and the rotation rate of U (U' = (-F', G'))."""
    l = sample.l_val
    dU1 = -l * math.sin(sample.eta)
    dU2 = l * math.cos(sample.eta)
    u1, u2 = sample.u_vec
    darg = (u1 * dU2 - u2 * dU1) / (u1 * u1 + u2 * u2)
    return darg - 2.0 * ex.evaluate(spec.m, sample.t)


def ode_residual(sample: CurveSample, spec: ProblemSpec,
                 phi_prime: float | None = None) -> float:
    """2 m y - l cos(phi) + y phi'; vanishes on solutions.

    ``phi_prime`` may be supplied from an independent estimate (e.g. finite
    differences of a trace); by default it is computed from the frame.
    """
    if phi_prime is None:
        phi_prime = phi_rate(sample, spec)
    m = ex.evaluate(spec.m, sample.t)
    return 2.0 * m * sample.y - sample.l_val * sample.tangent_dir[0] + sample.y * phi_prime


def uniform_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference derivative of uniformly spaced data (along axis 0)."""
    f = np.asarray(values, dtype=float)
    n = len(f)
    if n < 5:
        return np.gradient(f, h, axis=0)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12.0 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12.0 * h)
    return d


def mean_curvature(sample: CurveSample, spec: ProblemSpec) -> float:
    """H = m / l at a regular point."""
    if sample.l_val == 0.0:
        raise ZeroDivisionError(f"H is unbounded at the singular point t={sample.t!r}")
    return ex.evaluate(spec.m, sample.t) / sample.l_val
