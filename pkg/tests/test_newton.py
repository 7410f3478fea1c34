import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkline.acceptance import binomial_recenter, sample_in_disc
from berkline.bline import eta
from berkline.newton import (
    DegenerateImageError,
    Polynomial,
    disc_image,
    dominant_index,
    local_degree,
    polygon_roots,
    skeleton_monomial,
)
from berkline.valuation import ONE, ZERO, DomainError, Radius
from strategies import P2, centers

E = Radius.exp
F = Fraction
T2 = Polynomial.of(0, 0, 1)


def test_polygon_examples():
    assert polygon_roots(Polynomial.of(-2, 0, 1), P2)["root_valuations"] == [F(1, 2), F(1, 2)]
    assert polygon_roots(Polynomial.of(0, 1), P2)["root_valuations"] == [None]
    assert sorted(polygon_roots(Polynomial.of(4, 1, 2), P2)["root_valuations"]) == [-1, 2]
    with pytest.raises(DomainError):
        polygon_roots(Polynomial(()), P2)


def test_disc_image_examples():
    assert disc_image(T2, 1, E(-2), P2) == eta(1, E(-3))
    assert disc_image(T2, 0, E(Fraction(-5, 3)), P2) == eta(0, E(Fraction(-10, 3)))
    with pytest.raises(DegenerateImageError):
        disc_image(Polynomial.of(7), 0, ONE, P2)
    rng = random.Random(1)
    for _ in range(1000):
        x = sample_in_disc(rng, F(1), E(-2), P2)
        assert P2.abs(T2(x) - 1) <= E(-3)


def test_local_degree_examples():
    assert local_degree(T2, eta(0, E(Fraction(7, 3)))) == 2
    assert local_degree(T2, eta(1, E(-2))) == 1
    assert local_degree(T2, eta(1, E(-1))) == 2
    assert local_degree(T2, eta(0, ZERO)) == 2
    assert local_degree(T2, eta(3, ZERO)) == 1


def test_skeleton_monomial_examples():
    (piece,) = skeleton_monomial(T2, 0, E(-3), ONE)
    assert (piece.m.rho, piece.m.g, piece.degree) == (ONE, 2, 2)
    (piece,) = skeleton_monomial(T2, 1, ZERO, E(-1))
    assert (piece.m.rho, piece.m.g, piece.degree) == (E(-1), 1, 1)
    (piece,) = skeleton_monomial(T2, 1, E(-1), ONE)
    assert (piece.m.rho, piece.m.g, piece.degree) == (ONE, 2, 2)


def test_recenter_matches_binomial():
    h = Polynomial.of(F(1, 3), -2, 0, F(5, 7), 1)
    assert list(h.recenter(F(-3, 2)).coeffs) == binomial_recenter(list(h.coeffs), F(-3, 2))


coefficients = st.builds(Fraction, st.integers(-32, 32), st.integers(1, 32))
polys = st.lists(coefficients, min_size=2, max_size=6).filter(lambda cs: cs[-1] != 0 and any(cs[1:])).map(
    lambda cs: Polynomial(tuple(cs))
)
exp_radii = st.integers(-24, 24).map(lambda k: E(Fraction(k, 4)))


@given(polys)
def test_root_count(h):
    vals = polygon_roots(h, P2)["root_valuations"]
    assert len(vals) == h.degree


@settings(deadline=None)
@given(polys, centers, exp_radii, st.integers(0, 10**6))
def test_disc_image_contains_samples(h, a, r, seed):
    img = disc_image(h, a, r, P2)
    rng = random.Random(seed)
    for _ in range(50):
        x = sample_in_disc(rng, a, r, P2)
        assert P2.abs(h(x) - img.a) <= img.r


@given(polys, centers, exp_radii)
def test_degree_bounds_and_monotone(h, a, r):
    d = local_degree(h, eta(a, r))
    assert 1 <= d <= h.degree
    c = h.recenter(a)
    assert dominant_index(c, r * E(1), P2) >= dominant_index(c, r, P2)


monic = st.lists(st.integers(-8, 8), min_size=2, max_size=3).map(lambda cs: Polynomial.of(*cs, 1))


@settings(deadline=None)
@given(monic, monic, centers, exp_radii)
def test_degree_multiplicative(g, h, a, r):
    x = eta(a, r)
    y = disc_image(h, a, r, P2)
    assert local_degree(g.compose(h), x) == local_degree(g, y) * local_degree(h, x)


@given(polys, centers, st.integers(-12, 0), st.integers(1, 12))
def test_skeleton_pieces_match_disc_image(h, a, lo, span):
    pieces = skeleton_monomial(h, a, E(lo), E(lo + span))
    for piece in pieces:
        lo_q = piece.lo.q
        hi_q = piece.hi.q
        for k in range(1, 11):
            t = E(lo_q + (hi_q - lo_q) * Fraction(k, 11))
            img = disc_image(h, a, t, P2)
            assert img.r == piece.m(t)
            assert local_degree(h, eta(a, t)) == piece.degree
