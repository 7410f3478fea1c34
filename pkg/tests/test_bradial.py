import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkline.acceptance import ANNULUS_GRAPH, random_bpoint, random_expr, random_piece
from berkline.bline import eta
from berkline.bradial import (
    B0,
    B1,
    B2,
    B3,
    R0,
    R1,
    R2,
    R3,
    R6,
    R7,
    Compl,
    Disc,
    Everything,
    Inter,
    RadialSet,
    SwissCheese,
    Union,
    brick_ops,
    cheese_to_bricks,
    covers,
    expr_from_json,
    is_empty,
    is_empty_equals,
    normalize,
    pairwise_disjoint,
    set_equal,
)
from berkline.valuation import INF, ONE, ZERO, Radius, ValidationError
from strategies import P2, centers

E = Radius.exp
F = Fraction


def _kinds(rs):
    out = {}
    for p in rs:
        out[p.kind] = out.get(p.kind, 0) + 1
    return out


def test_member_examples():
    assert R2(F(0), ONE, INF, E(-1), F(1)).member(eta(F(1, 4), E(1)))
    assert not R7(F(0), ONE, E(-2), ONE).member(eta(1, E(-1)))
    assert R0(F(5), ZERO).member(eta(5, ZERO))


def test_annulus_graph_complement_piece_count():
    # the required golden count; the disjoint normal form has 7 pieces here
    comp = normalize(Compl(ANNULUS_GRAPH), P2)
    assert len(comp) == 10


def test_annulus_graph_complement_inventory():
    comp = normalize(Compl(ANNULUS_GRAPH), P2)
    assert _kinds(comp) == {"R0": 1, "R1": 1, "R2": 1, "R3": 2, "R4": 1, "R5": 1}
    pieces = list(comp) + [ANNULUS_GRAPH]
    assert pairwise_disjoint(pieces, P2)
    assert covers(pieces, P2)
    assert set_equal(Union((ANNULUS_GRAPH, comp)), Everything(), P2)


def test_annulus_graph_complement_finite_outer_radius():
    X = R2(F(0), ONE, E(3), E(-1), F(1))
    comp = normalize(Compl(X), P2)
    assert len(comp) == 11
    assert pairwise_disjoint(list(comp) + [X], P2) and covers(list(comp) + [X], P2)


def test_disjoint_segments_meet_empty():
    assert is_empty(Inter((R1(F(0), E(-3), E(-2)), R1(F(0), E(-1), ONE))), P2)


def test_open_disc_pieces_stay_apart():
    A, B = R6(F(0), ONE, E(-2)), R7(F(0), ONE, E(-2), ONE)
    out = normalize(Union((A, B)), P2)
    assert len(out) == 2
    rng = random.Random(7)
    for _ in range(1000):
        x = random_bpoint(rng)
        assert out.member(x) == (A.member(x) or B.member(x))


def test_inverted_band_is_empty():
    assert is_empty(R3(F(0), E(-2), ONE, ONE, F(1), E(-1), F(1)), P2)


def test_idempotent_union():
    A = R3(F(1), E(-2), E(2), E(-1), F(1), ONE, F(1))
    assert is_empty_equals(A, Union((A, A)), P2)["equal"]


def test_brick_examples():
    ops = brick_ops(B2(F(0), E(-2), ONE))
    assert set_equal(ops["skeleton"], R1(F(0), E(-2), ONE), P2)
    assert len(brick_ops(B1(F(0), ONE))["skeleton"]) == 0


def test_tube_off_skeleton_points_are_full_discs():
    b = B3(F(0), ONE, (F(1),))
    minus = brick_ops(b)["minus_skeleton"]
    rng = random.Random(3)
    hits = 0
    for _ in range(2000):
        x = random_bpoint(rng)
        if not minus.member(x):
            continue
        hits += 1
        for _ in range(20):
            n = -(x.r.q.numerator // x.r.q.denominator) if x.r.is_exp else 0
            y = x.a if x.r.is_zero else x.a + F(rng.randint(-30, 30), rng.choice([1, 3, 5])) * F(2) ** n
            assert b.member(eta(y, ZERO))
    assert hits > 0


def test_cheese_examples():
    res = cheese_to_bricks([SwissCheese(Disc("closed", F(0), ONE)), SwissCheese(None, (Disc("closed", F(0), ONE),))])
    assert [type(b).__name__ for b in res["bricks"]] == ["B3", "B2"]
    assert pairwise_disjoint(res["lift"], P2) and covers(res["lift"], P2)
    assert cheese_to_bricks(SwissCheese(None))["bricks"] == [B1(F(0), INF)]
    holes = cheese_to_bricks(SwissCheese(Disc("closed", F(0), ONE), (Disc("open", F(1), ONE),)))["bricks"]
    assert holes == [B3(F(0), ONE, (F(1),))]
    with pytest.raises(ValidationError):
        cheese_to_bricks([SwissCheese(Disc("closed", F(0), ONE))])


def test_json_round_trip():
    rs = normalize(Compl(ANNULUS_GRAPH), P2)
    back = expr_from_json(rs.to_json())
    assert set_equal(rs, back, P2)
    assert isinstance(back, RadialSet)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_normalize_sound(seed):
    rng = random.Random(seed)
    e = random_expr(rng, [random_piece(rng) for _ in range(rng.randint(1, 4))])
    out = normalize(e, P2)
    assert pairwise_disjoint(list(out), P2)
    for _ in range(100):
        x = random_bpoint(rng)
        assert out.member(x) == e.member(x)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_involution_and_de_morgan(seed):
    rng = random.Random(seed)
    A, B, C = (random_piece(rng) for _ in range(3))
    assert set_equal(Compl(Compl(A)), A, P2)
    assert set_equal(Compl(Union((A, B, C))), Inter((Compl(A), Compl(B), Compl(C))), P2)
    assert set_equal(Compl(Inter((A, B, C))), Union((Compl(A), Compl(B), Compl(C))), P2)


@st.composite
def bricks(draw):
    a = draw(centers)
    k = draw(st.integers(0, 3))
    if k == 0:
        return B0(a)
    if k == 1:
        return B1(a, draw(st.one_of(st.just(INF), st.integers(-6, 6).map(E))))
    if k == 2:
        lo = draw(st.integers(-6, 5))
        hi = draw(st.one_of(st.just(INF), st.integers(lo + 1, 6).map(E)))
        return B2(a, E(lo), hi)
    n = draw(st.integers(-3, 3))
    # over F_2 a tube has at most one hole besides the residue class of a
    holes = (a + F(2) ** n,) if draw(st.booleans()) else ()
    return B3(a, E(-n), holes)


@settings(max_examples=40, deadline=None)
@given(bricks())
def test_brick_splits_into_skeleton_and_rest(b):
    ops = brick_ops(b)
    assert set_equal(ops["as_radial"], Union((ops["skeleton"], ops["minus_skeleton"])), P2)
    assert is_empty(Inter((ops["skeleton"], ops["minus_skeleton"])), P2)
    assert set_equal(ops["as_radial"], b, P2)
