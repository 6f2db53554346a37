import math

import numpy as np
import pytest

from singrev.errors import DomainError, IntegrationError
from singrev.quad import cumulative, integrate


def F_oracle(t):
    # d/dt (sin 2t - 2t cos 2t)/4 = t sin 2t
    return (np.sin(2 * t) - 2 * t * np.cos(2 * t)) / 4


def G_oracle(t):
    # d/dt (t sin 2t / 2 + (cos 2t - 1)/4) = t cos 2t
    return t * np.sin(2 * t) / 2 + (np.cos(2 * t) - 1) / 4


def test_oracles_differentiate_to_integrands():
    t = np.linspace(-1, 1, 101)
    h = 1e-5
    for oracle, f in ((F_oracle, lambda u: u * np.sin(2 * u)),
                      (G_oracle, lambda u: u * np.cos(2 * u))):
        fd = (oracle(t + h) - oracle(t - h)) / (2 * h)
        assert np.max(np.abs(fd - f(t))) < 1e-9


@pytest.mark.parametrize("f, a, b, value, tol", [
    (lambda u: np.sin(u) * np.sin(2 * u), 0.0, 2 * math.pi, 0.0, 1e-10),
    (lambda u: np.sin(u) ** 2 * np.cos(2 * u), 0.0, math.pi, -math.pi / 4, 1e-10),
    (lambda u: np.ones_like(u), 0.0, 1.0, 1.0, 1e-14),
    (lambda u: np.exp(u), -1.0, 2.0, math.e**2 - math.exp(-1), 1e-12),
    (lambda u: np.sqrt(u), 0.0, 1.0, 2.0 / 3.0, 1e-9),
])
def test_integrate_known_values(f, a, b, value, tol):
    assert abs(integrate(f, a, b) - value) <= tol


def test_integrate_reversed_limits():
    f = lambda u: u**2
    assert integrate(f, 1.0, 0.0) == pytest.approx(-1.0 / 3.0, abs=1e-14)
    assert integrate(f, 0.5, 0.5) == 0.0


def test_integrate_rejects_nonfinite_integrand():
    with pytest.raises(IntegrationError):
        integrate(lambda u: 1.0 / u, -1.0, 1.0)


def test_cumulative_constant_integrand():
    c = cumulative(lambda u: 2.0 * np.ones_like(u), -1.0, 3.0)
    t = np.linspace(-1, 3, 41)
    assert np.max(np.abs(c(t) - 2 * t)) < 1e-13


def test_cumulative_matches_example_oracles():
    t = np.linspace(-1, 1, 2001)
    F = cumulative(lambda u: u * np.sin(2 * u), -1.0, 1.0)
    G = cumulative(lambda u: u * np.cos(2 * u), -1.0, 1.0)
    assert np.max(np.abs(F(t) - F_oracle(t))) <= 1e-9
    assert np.max(np.abs(G(t) - G_oracle(t))) <= 1e-9


def test_anchor_is_exactly_zero():
    c = cumulative(np.cos, -2.0, 5.0)
    assert c(0.0) == 0.0
    i = int(np.searchsorted(c.breakpoints, 0.0))
    assert c.breakpoints[i] == 0.0 and c.values[i] == 0.0
    assert c.order >= 3


def test_additivity_against_integrate():
    f = lambda u: np.sin(3 * u) * np.exp(-u / 4) + u**2
    tol = 1e-10
    c = cumulative(f, -2.0, 6.0, tol)
    rng = np.random.default_rng(3)
    for a, b in rng.uniform(-2.0, 6.0, size=(100, 2)):
        assert abs((c(b) - c(a)) - integrate(f, a, b, tol)) <= 2 * tol * (1 + abs(c(b) - c(a)))


def test_derivative_consistency():
    f = lambda u: np.cos(u) * (1 + u**2)
    c = cumulative(f, -3.0, 3.0)
    rng = np.random.default_rng(4)
    t = rng.uniform(-2.9, 2.9, 100)
    h = 1e-5
    fd = (c(t + h) - c(t - h)) / (2 * h)
    assert np.all(np.abs(fd - f(t)) <= 1e-5 * (1 + np.abs(f(t))))
    assert np.all(np.abs(c.derivative(t) - f(t)) <= 1e-9 * (1 + np.abs(f(t))))


def test_continuity_across_breakpoints():
    c = cumulative(lambda u: np.sin(5 * u) + 2, -4.0, 4.0)
    inner = c.breakpoints[1:-1]
    eps = 1e-12
    assert np.max(np.abs(c(inner - eps) - c(inner + eps))) < 1e-10


def test_domain_must_contain_anchor():
    with pytest.raises(DomainError):
        cumulative(np.cos, 1.0, 2.0)


def test_query_outside_domain():
    c = cumulative(np.cos, -1.0, 1.0)
    with pytest.raises(DomainError):
        c(1.5)


def test_results_are_immutable():
    c = cumulative(np.cos, -1.0, 1.0)
    with pytest.raises(ValueError):
        c.breakpoints[0] = 5.0
