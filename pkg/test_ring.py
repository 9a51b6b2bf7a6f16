"""Tests for exact scalar arithmetic and the expression parser"""
import random
from fractions import Fraction

import pytest

from ring import (ONE, ZERO, DenominatorVanishes, DivisionByZero, DivisionBySomethingContainingCoordinates,
                  NotACoordinate, ParseError, Scalar, UnboundSymbol, parse_rational, parse_scalar, sym)

x, y, z, w = (sym(c) for c in "xyzw")
lam = sym("lambda")


def random_scalar(rng: random.Random, terms: int = 4) -> Scalar:
    names = ["x", "y", "z", "w", "lambda", "a1"]
    total = ZERO
    for _ in range(terms):
        term = Scalar.const(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        for _ in range(rng.randint(0, 3)):
            term = term * sym(rng.choice(names))
        total = total + term
    return total


def test_polynomial_identities():
    assert (x + 1) ** 2 == x * x + 2 * x + 1
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert x - x == ZERO
    assert not (x - x)
    assert parse_scalar("(x + 1)^2") == parse_scalar("x^2 + 2*x + 1")


def test_parameter_denominators_cancel():
    assert (lam * x) / lam == x
    assert parse_scalar("(lambda^2 - 1)/(lambda - 1)") == lam + 1
    assert parse_scalar("1/lambda + 1/lambda") == 2 / lam
    assert parse_scalar("a2/(2*a1)") * 2 * sym("a1") == sym("a2")


def test_division_errors():
    with pytest.raises(DivisionBySomethingContainingCoordinates):
        ONE / x
    with pytest.raises(DivisionByZero):
        x / ZERO
    with pytest.raises(DivisionByZero):
        x / 0


def test_partial_derivatives():
    assert parse_scalar("x^2*y").partial("x") == 2 * x * y
    assert parse_scalar("x*z/lambda").partial("z") == x / lam
    assert parse_scalar("lambda").partial("w") == ZERO
    with pytest.raises(NotACoordinate):
        x.partial("lambda")


def test_product_rule_on_random_scalars():
    rng = random.Random(7)
    for _ in range(25):
        p, q = random_scalar(rng), random_scalar(rng)
        for c in "xyzw":
            assert (p * q).partial(c) == p.partial(c) * q + p * q.partial(c)


def test_distributivity_on_random_scalars():
    rng = random.Random(11)
    for _ in range(25):
        p, q, r = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        assert p * (q + r) == p * q + p * r
        assert (p - q) + q == p


def test_evaluate_and_substitute():
    value = parse_scalar("x^2/lambda + y")
    assert value.evaluate({"x": 3, "y": 1, "lambda": 2}) == Fraction(11, 2)
    with pytest.raises(UnboundSymbol):
        value.evaluate({"x": 1})
    assert value.subs({"lambda": 1}) == x * x + y
    assert value.subs({"x": lam}) == lam + y
    with pytest.raises(DenominatorVanishes):
        parse_scalar("1/(lambda - 1)").subs({"lambda": 1})


def test_compile_matches_exact_evaluation():
    value = parse_scalar("(1 - lambda^2)/(2*lambda)*x + 3*y^2")
    exact = value.evaluate({"lambda": 3, "x": 2, "y": 1})
    approx = value.compile()({"lambda": 3.0, "x": 2.0, "y": 1.0})
    assert approx == pytest.approx(float(exact))


def test_render_uses_display_names():
    assert sym("x").render() == "x"
    assert ZERO.render() == "0"
    assert lam.render() == "λ"
    assert parse_scalar("λ") == lam
    assert parse_scalar("μ") == sym("mu")


def test_parse_rational():
    assert parse_rational("3") == Fraction(3)
    assert parse_rational("-2/5") == Fraction(-2, 5)
    with pytest.raises(ParseError):
        parse_rational("x")
    with pytest.raises(ParseError):
        parse_rational("0.5")


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_scalar("x +")
    with pytest.raises(ParseError):
        parse_scalar("nu")
    with pytest.raises(ParseError):
        parse_scalar("x^y")


def test_as_rational():
    assert parse_scalar("6/4").as_rational() == Fraction(3, 2)
    assert x.as_rational() is None
    assert (x - x + 2).as_rational() == 2
