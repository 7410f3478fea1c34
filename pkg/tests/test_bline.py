from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from berkline.bline import BPoint, disc_rel, eta, join, join_closure, point_eq_type, red, span_tree
from berkline.valuation import ONE, ZERO, DomainError, Radius
from strategies import P2, bpoints

E = Radius.exp


def test_point_equality_examples():
    assert point_eq_type(eta(0, ONE), eta(1, ONE)) == {"equal": True, "type_x": 2}
    assert point_eq_type(eta(0, ZERO), eta(1, ZERO)) == {"equal": False, "type_x": 1}
    for q in (Fraction(-7, 3), Fraction(0), Fraction(5, 2)):
        assert eta(Fraction(3, 5), E(q)).type == 2


def test_disc_relation_examples():
    assert join(eta(0, ZERO), eta(2, ZERO)) == eta(0, E(-1))
    rel = disc_rel(eta(0, E(-1)), eta(0, ONE))
    assert rel["relation"] == "x_inside_y" and rel["strict"]
    rel = disc_rel(eta(1, E(-1)), eta(0, ONE))
    assert rel["relation"] == "x_inside_y" and not rel["strict"]
    assert disc_rel(eta(0, ZERO), eta(1, ZERO))["relation"] == "disjoint"
    assert disc_rel(eta(0, ONE), eta(1, ONE))["relation"] == "equal"


def test_red_examples():
    assert red(eta(3, E(-1))).value == 1
    assert red(eta(0, ZERO)).value == 0
    with pytest.raises(DomainError):
        red(eta(0, ONE))
    with pytest.raises(DomainError):
        red(eta(Fraction(1, 2), ZERO))


def test_span_tree_examples():
    t = span_tree([eta(0, ZERO), eta(1, ZERO), eta(2, ZERO)])
    assert eta(0, E(-1)) in t.nodes
    assert t.root() == eta(0, ONE)
    inner = t.nodes.index(eta(0, E(-1)))
    assert t.parent[t.nodes.index(eta(0, ZERO))] == inner
    assert t.parent[t.nodes.index(eta(2, ZERO))] == inner
    assert len(span_tree([eta(5, ZERO)]).nodes) == 1
    chain = span_tree([eta(0, ZERO), eta(0, E(-1))])
    assert len(chain.nodes) == 2 and len(chain.edges()) == 1


def test_dot_export():
    dot = span_tree([eta(0, ZERO), eta(2, ZERO)]).to_dot()
    assert dot.startswith("graph") or dot.startswith("digraph")
    assert "η(" in dot


def test_json_round_trip():
    x = eta(Fraction(-3, 4), E(Fraction(2, 3)))
    assert BPoint.from_json(x.to_json(), P2) == x


@given(bpoints(), bpoints(), bpoints())
def test_join_laws(x, y, z):
    assert join(x, y) == join(y, x)
    assert join(join(x, y), z) == join(x, join(y, z))
    assert join(x, x) == x


@given(bpoints(), bpoints())
def test_inside_iff_join(x, y):
    inside = disc_rel(x, y)["relation"] in ("x_inside_y", "equal")
    assert inside == (join(x, y) == y)


@given(st.integers(-8, 8), st.integers(1, 6), st.integers(-40, 40), st.integers(0, 6))
def test_red_factors_through_subdiscs(m, n0, u, extra):
    # r0 = p^-n0 < 1; every point of D(a0, r0) reduces like a0
    a0 = Fraction(m)
    r0 = E(-n0)
    x = eta(a0, r0)
    y = eta(a0 + u * Fraction(2) ** (n0 + extra), E(-n0 - extra))
    assert y.le(x)
    assert red(y) == red(x)


@given(st.lists(bpoints(), min_size=1, max_size=6))
def test_span_tree_join_closed(pts):
    t = span_tree(pts)
    for x in t.nodes:
        for y in t.nodes:
            assert join(x, y) in t.nodes
    for child, parent in t.parent.items():
        if parent is not None:
            c, p = t.nodes[child], t.nodes[parent]
            assert c.le(p) and c != p
    for x in pts:
        assert x in t.nodes
    # minimal: every node is an input or a join of two inputs
    for n in t.nodes:
        assert any(join(x, y) == n for x in pts for y in pts)
    assert len(join_closure(pts)) == len(t.nodes)
