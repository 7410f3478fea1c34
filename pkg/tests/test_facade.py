import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkline.acceptance import fixtures
from berkline.bline import INFINITY_POINT, eta
from berkline.facade import (
    Domain,
    Encoded,
    Triangulation,
    build_facade,
    check_compatible,
    compile_map,
    compiled_edge_value,
    map_transport,
    sample_points,
    skeleton_retract,
    transport_case,
    transport_id,
    triangulate,
)
from berkline.maps import Mobius, RationalMap, pushforward
from berkline.valuation import INF, ONE, ZERO, DomainError, Radius, ValidationError

E = Radius.exp
F = Fraction
X0 = eta(0, ONE)
T2 = RationalMap.polynomial(0, 0, 1)


@pytest.fixture(scope="module")
def fx():
    out = fixtures()
    out["P1 reduced"] = build_facade(Domain("P1"), [X0], reduce=True)
    out["A1 branched"] = build_facade(Domain("A1"), [eta(0, ZERO), X0, eta(1, E(-1))])
    out["P1 three"] = build_facade(Domain("P1"), [X0, eta(0, E(-2)), INFINITY_POINT])
    return out


def test_retraction_examples(fx):
    Fa = fx["A1"]
    assert Fa.tau(eta(2, E(-5))) == X0
    assert Fa.tau(eta(4, E(3))) == eta(0, E(3))
    assert Fa.on_skeleton(eta(4, E(3)))
    parts = skeleton_retract(Fa)
    assert parts["graph"] is Fa.tri


def test_triangulation_examples():
    A = Domain("A1")
    tri = triangulate(A, [X0])
    assert len(tri.vertices) == 1 and len(tri.edges) == 1
    with pytest.raises(ValidationError):
        triangulate(A, [])
    refined = triangulate(A, [X0], mode="refine", extra=[eta(0, E(1))])
    assert len(refined.vertices) == 2
    pruned = triangulate(A, refined.vertices, mode="prune", keep=[X0])
    assert pruned.vertices == [X0]


def test_triangulation_rejects_points_outside_or_bad_radius():
    with pytest.raises(ValidationError):
        triangulate(Domain.disc(0, ONE), [X0, eta(0, E(1))])
    with pytest.raises(ValidationError):
        build_facade(Domain("A1"), [eta(0, E(F(1, 2)))])


def test_triangulation_json_round_trip(fx):
    for F_ in fx.values():
        back = Triangulation.from_json(F_.tri.to_json())
        assert back.key() == F_.tri.key()


def test_facade_examples(fx):
    Fd, Fa, Fp = fx["disc"], fx["A1"], fx["P1"]
    assert len(Fd.vertices) == 1 and not Fd.edges
    assert Fd.tubes[0].f == Mobius(1, 0, 0, 1) and Fd.tubes[0].excluded == ()
    assert len(Fa.edges) == 1 and Fa.edges[0].chart == Mobius(1, 0, 0, 1)
    assert Fa.edges[0].r1 == ONE and Fa.edges[0].r2 == INF
    (disc,) = Fp.tubes[0].discs
    assert disc == Mobius(0, 1, 1, 0)
    assert not fx["P1 reduced"].tubes[0].discs


def test_skeleton_dot(fx):
    dot = fx["A1"].tri.to_dot()
    assert dot.count(" -- ") == 1 and "η(0/1, p^0/1)" in dot


def test_encode_examples(fx):
    Fd = fx["disc"]
    e = Fd.encode(eta(3, E(-2)))
    assert e == Encoded("tube", 0, eta(3, E(-2)), 1)
    assert Fd.encode(X0) == Encoded("vtx2", 0)
    assert Fd.decode(e) == eta(3, E(-2))


def test_decode_rejects_bad_tube_constraint(fx):
    with pytest.raises(ValidationError):
        fx["disc"].decode(Encoded("tube", 0, eta(3, E(-2)), 0))
    with pytest.raises(DomainError):
        fx["disc"].encode(eta(0, E(1)))


def test_transport_examples():
    Fd = build_facade(Domain.disc(0, ONE), [X0])
    G = build_facade(Domain.disc(0, ONE), [X0, eta(0, E(-1))])
    e = Fd.encode(eta(0, E(-1)))
    assert transport_id(Fd, G, e).kind == "vtx2"
    e = Fd.encode(eta(3, E(-2)))
    assert transport_case(Fd, G, e) == "Y1"
    t = transport_id(Fd, G, e)
    assert (t.kind, t.alpha, t.eta) == ("tube", 1, eta(3, E(-2)))


def test_map_transport_examples(fx):
    Fd = fx["disc"]
    check_compatible(T2, Fd, Fd)
    out = map_transport(T2, Fd, Fd, Encoded("tube", 0, eta(3, E(-2)), 1))
    assert out == Encoded("tube", 0, eta(9, E(-3)), 1)
    assert map_transport(T2, Fd, Fd, Encoded("vtx2", 0)) == Encoded("vtx2", 0)


def test_compile_outer_edge(fx):
    Fa = fx["A1"]
    comp = compile_map(T2, Fa, Fa)
    (row,) = comp["edges"]
    assert row["degree"] == 2 and row["monomial"] == {"rho": {"exp": "0/1"}, "g": "2/1"}
    for k in range(1, 11):
        t = E(F(k, 2))
        j, val = compiled_edge_value(comp, 0, t)
        assert val == t * t
        assert map_transport(T2, Fa, Fa, Fa.encode(eta(0, t))) == Encoded("edge", j, eta(0, val))
    (tube,) = comp["tubes"]
    assert tube["residue_map"]["num"] == [0, 0, 1]


@pytest.mark.parametrize("name", ["disc", "A1", "P1", "P1 reduced", "A1 branched", "P1 three"])
def test_round_trips_and_retraction(fx, name):
    F_ = fx[name]
    rng = random.Random(11)
    for y in sample_points(F_, 400, rng):
        e = F_.encode(y)
        if e.kind == "tube":
            assert F_.cfg.residue(e.eta.a) == e.alpha
        z = F_.decode(e)
        assert z is y or z == y
        assert F_.encode(z) == e
        t = F_.tau(y)
        assert F_.on_skeleton(t) and F_.tau(t) == t
        if F_.on_skeleton(y):
            assert t == y
        n0 = F_.nu(ZERO, y)
        assert n0 is y or n0 == y
        assert F_.on_skeleton(F_.nu(ONE, y))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_refinement_square(depth, seed):
    Fd = build_facade(Domain.disc(0, ONE), [X0])
    G = build_facade(Domain.disc(0, ONE), [X0, eta(0, E(-depth))])
    rng = random.Random(seed)
    for y in sample_points(Fd, 60, rng):
        e = Fd.encode(y)
        t = transport_id(Fd, G, e)
        assert t == G.encode(y)
        assert G.decode(t) == Fd.decode(e)


def test_morphism_square_on_disc(fx):
    Fd = fx["disc"]
    rng = random.Random(5)
    for y in sample_points(Fd, 500, rng):
        assert map_transport(T2, Fd, Fd, Fd.encode(y)) == Fd.encode(pushforward(T2, y))
