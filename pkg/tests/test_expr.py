import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singrev import expr as ex
from singrev.config import fixture_names, load_config
from singrev.errors import EvaluationError, ParseError


def test_parse_variable():
    assert ex.parse("t") == ex.Var()


def test_power_shape():
    e = ex.parse("sin(t)^2")
    assert isinstance(e, ex.Pow)
    assert e.base == ex.Unary("sin", ex.Var())
    assert e.exponent == 2.0


@pytest.mark.parametrize("text, t, value", [
    ("1+t", 0.5, 1.5),
    ("sin(t)", math.pi / 2, 1.0),
    ("t*(1+t)", 2.0, 6.0),
    ("2^3^2", 0.0, 512.0),
    ("-t^2", 3.0, -9.0),
    ("(-t)^2", 3.0, 9.0),
    ("2**-1", 0.0, 0.5),
    ("8/4/2", 0.0, 1.0),
    ("1-2-3", 0.0, -4.0),
    ("exp(log(t))", 2.5, 2.5),
    ("sqrt(abs(t))", -4.0, 2.0),
    ("pi", 0.0, math.pi),
    ("1e-3*t", 2.0, 2e-3),
])
def test_evaluate(text, t, value):
    assert ex.evaluate(ex.parse(text), t) == pytest.approx(value, rel=1e-15)


def test_evaluate_vectorised_matches_scalar():
    e = ex.parse("t^3 - sin(2*t)/(1+t^2)")
    t = np.linspace(-2, 2, 17)
    vec = ex.evaluate(e, t)
    assert all(vec[i] == ex.evaluate(e, float(t[i])) for i in range(len(t)))


def test_pole_is_an_evaluation_fault():
    with pytest.raises(EvaluationError) as info:
        ex.evaluate(ex.parse("1/t"), 0.0)
    assert info.value.code == "E_EVAL"


def test_vector_fault_reports_offending_point():
    with pytest.raises(EvaluationError) as info:
        ex.evaluate(ex.parse("log(t)"), np.array([1.0, 2.0, -1.0]))
    assert info.value.t == -1.0


@pytest.mark.parametrize("text, order, t, value", [
    ("t^2", 1, 3.0, 6.0),
    ("sin(t)", 1, 0.0, 1.0),
    ("sin(t)^2", 2, 0.0, 2.0),
    ("t + t^2", 2, 0.0, 2.0),
    ("tan(t)", 1, 0.0, 1.0),
    ("exp(2*t)", 3, 0.0, 8.0),
    ("sqrt(t)", 1, 4.0, 0.25),
    ("log(t)", 2, 2.0, -0.25),
    ("abs(t)", 1, -3.0, -1.0),
])
def test_derivative_values(text, order, t, value):
    assert ex.evaluate(ex.derivative(ex.parse(text), order), t) == pytest.approx(value)


def test_second_derivative_of_sin_squared_against_step_sweep():
    # oracle: central second differences, converged over a step sweep
    f = lambda t: math.sin(t) ** 2
    estimates = [(f(h) - 2 * f(0.0) + f(-h)) / h**2 for h in (1e-3, 1e-4)]
    symbolic = ex.evaluate(ex.derivative(ex.parse("sin(t)^2"), 2), 0.0)
    assert all(abs(symbolic - e) < 1e-5 for e in estimates)


def test_derivative_uses_only_grammar_nodes():
    kinds = (ex.Const, ex.Var, ex.Unary, ex.Binary, ex.Pow)

    def walk(e):
        assert isinstance(e, kinds)
        for name in getattr(type(e), "__dataclass_fields__", {}):
            child = getattr(e, name)
            if isinstance(child, ex.Expr):
                walk(child)

    walk(ex.derivative(ex.parse("tan(t)*exp(-t^2)/sqrt(1+t^2)"), 3))


def test_only_trivial_simplification():
    assert ex.differentiate(ex.parse("3")) == ex.Const(0.0)
    assert ex.differentiate(ex.parse("t")) == ex.Const(1.0)
    assert str(ex.differentiate(ex.parse("2*t"))) == "2"


@pytest.mark.parametrize("text, fragment", [
    ("1 +", "end of input"),
    ("sin t", "'('"),
    ("foo(t)", "unknown"),
    ("x + 1", "unknown"),
    ("(t", "')'"),
    ("t^t", "constant"),
    ("1e999", "overflow"),
    ("t $ 2", "unexpected"),
])
def test_syntax_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        ex.parse(text)
    assert fragment in str(info.value)
    assert info.value.code == "E_SYNTAX"
    assert 0 <= info.value.position <= len(text)


def test_parse_constant():
    assert ex.parse_constant("3/4") == 0.75
    assert ex.parse_constant("2*pi") == 2 * math.pi
    with pytest.raises(ParseError):
        ex.parse_constant("t + 1")


def test_printing_is_readable():
    assert ex.to_text(ex.parse("-t^2")) == "-t^2"
    assert ex.to_text(ex.parse("(1+t)*(1-t)")) == "(1 + t) * (1 - t)"
    assert ex.to_text(ex.parse("t^3^2")) == "t^9"  # constant exponent is folded
    assert ex.to_text(ex.parse("(t^3)^2")) == "(t^3)^2"
    assert ex.to_text(ex.parse("-(1+t)")) == "-(1 + t)"


# ---------------------------------------------------------------------------
# property tests

_leaf = st.one_of(
    st.just("t"),
    st.integers(1, 9).map(str),
    st.sampled_from(["0.5", "1.25", "pi"]),
)


def _compose(children):
    unary = st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(
        lambda p: f"{p[0]}({p[1]})")
    binary = st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(
        lambda p: f"({p[0]} {p[1]} {p[2]})")
    power = st.tuples(children, st.integers(2, 3)).map(lambda p: f"({p[0]})^{p[1]}")
    neg = children.map(lambda c: f"-{c}")
    quotient = children.map(lambda c: f"{c}/(2 + sin(t))")
    return st.one_of(unary, binary, power, neg, quotient)


expressions = st.recursive(_leaf, _compose, max_leaves=6)


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_parse_print_parse_fixed_point(text):
    once = ex.parse(text)
    printed = ex.to_text(once)
    again = ex.parse(printed)
    assert again == once
    assert ex.to_text(again) == printed


def _central_difference_check(e, t):
    d = ex.evaluate(ex.differentiate(e), t)
    errs = []
    for h in (1e-4, 1e-5, 1e-6):
        fd = (ex.evaluate(e, t + h) - ex.evaluate(e, t - h)) / (2 * h)
        errs.append(np.abs(d - fd) / (1.0 + np.abs(d)))
    return np.min(errs, axis=0)


@settings(max_examples=100, deadline=None)
@given(expressions, st.integers(0, 2**32 - 1))
def test_derivative_matches_central_differences(text, seed):
    e = ex.parse(text)
    t = np.random.default_rng(seed).uniform(-1.5, 1.5, 1000)
    with np.errstate(all="ignore"):
        values = ex.evaluate(ex.differentiate(e), t)
    # keep the check meaningful where the function is moderate
    ok = np.abs(values) < 1e6
    assert np.all(_central_difference_check(e, t[ok]) <= 1e-6)


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_expressions_differentiate_correctly(name):
    cfg = load_config(name)
    rng = np.random.default_rng(7)
    t = rng.uniform(cfg.t_min, cfg.t_max, 1000)
    for text in (cfg.l, cfg.m):
        e = ex.parse(text)
        for order in range(3):
            assert np.all(_central_difference_check(ex.derivative(e, order), t) <= 1e-6)
