from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from berkline.valuation import (
    INF,
    ONE,
    ZERO,
    DomainError,
    FieldConfig,
    Monomial,
    Radius,
    ValidationError,
    monomial_eval_cross,
    radius_arith,
    scalar_abs,
)
from strategies import P2, exp_radii, exponents, radii, rationals

E = Radius.exp


def test_radius_examples():
    assert radius_arith(E(Fraction(1, 2)), E(Fraction(1, 3)), "mul") == E(Fraction(5, 6))
    assert radius_arith(ZERO, E(-100), "cmp") == "less"
    assert radius_arith(E(-2), None, "pow", Fraction(3, 2)) == E(-3)


def test_radius_errors():
    with pytest.raises(DomainError):
        radius_arith(INF, ZERO, "mul")
    with pytest.raises(DomainError):
        radius_arith(ZERO, None, "pow", 2)
    with pytest.raises(DomainError):
        radius_arith(INF, None, "pow", Fraction(1, 2))


def test_absorption():
    assert ZERO * E(5) == ZERO
    assert INF * E(-5) == INF
    assert ZERO < E(-1000) < E(1000) < INF


def test_scalar_abs_examples():
    assert scalar_abs(12, P2) == E(-2)
    assert scalar_abs(0, P2) == ZERO
    assert scalar_abs(Fraction(3, 8), P2) == E(3)
    assert scalar_abs(9, FieldConfig(3)) == E(-2)


def test_field_config_rejects_composites():
    with pytest.raises(ValidationError):
        FieldConfig(6)


def test_monomial_examples():
    assert monomial_eval_cross(Monomial(E(-1), Fraction(2)), Monomial(ONE, Fraction(0)), E(-1))["value"] == E(-3)
    assert monomial_eval_cross(Monomial(ONE, Fraction(1)), Monomial(E(-2), Fraction(0)))["crossing"] == E(-2)
    assert monomial_eval_cross(Monomial(ONE, Fraction(1)), Monomial(E(-1), Fraction(1)))["crossing"] is None


def test_json_round_trip():
    for r in (ZERO, INF, E(Fraction(-7, 3))):
        assert Radius.from_json(r.to_json()) == r
    m = Monomial(E(Fraction(1, 2)), Fraction(-3, 4))
    assert Monomial.from_json(m.to_json()) == m


@given(rationals, rationals)
def test_abs_multiplicative_and_ultrametric(x, y):
    ax, ay = scalar_abs(x, P2), scalar_abs(y, P2)
    assert scalar_abs(x * y, P2) == radius_arith(ax, ay, "mul")
    s = scalar_abs(x + y, P2)
    assert s <= max(ax, ay)
    if ax != ay:
        assert s == max(ax, ay)


@given(radii, radii, radii)
def test_order_total_and_transitive(a, b, c):
    assert (a < b) + (b < a) + (a == b) == 1
    if a <= b and b <= c:
        assert a <= c
    assert a.cmp(b) == -b.cmp(a)


@given(exp_radii, exponents, exp_radii, exponents)
def test_crossing_solves_equation(r1, g1, r2, g2):
    m1, m2 = Monomial(r1, g1), Monomial(r2, g2)
    t = monomial_eval_cross(m1, m2)["crossing"]
    if g1 == g2:
        assert t is None
    else:
        assert m1(t) == m2(t)


@given(exp_radii, st.integers(-5, 5).filter(bool))
def test_monomial_strictly_monotone(rho, g):
    m = Monomial(rho, Fraction(g))
    lo, hi = m(E(-1)), m(E(1))
    assert (lo < hi) if g > 0 else (hi < lo)
