import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berkline.acceptance import RadiusThreshold
from berkline.bline import INFINITY_POINT, eta
from berkline.bradial import B2, Union, normalize, pairwise_disjoint, set_equal
from berkline.maps import (
    Mobius,
    RationalMap,
    UnsupportedConfiguration,
    fiber_count,
    grid_points,
    local_degree,
    multiplicity_locus,
    pushforward,
)
from berkline.newton import IncompleteOracleError, Polynomial, skeleton_monomial
from berkline.valuation import ONE, ZERO, DomainError, FieldConfig, Radius, ValidationError
from strategies import P2, bpoints

E = Radius.exp
F = Fraction
T2 = RationalMap.polynomial(0, 0, 1)
T3 = RationalMap.polynomial(0, 0, 0, 1)
INV = RationalMap(Polynomial.of(1), Polynomial.of(0, 1))


def test_pushforward_examples():
    assert pushforward(T2, eta(1, E(-2))) == eta(1, E(-3))
    for q in (F(-2), F(0), F(3, 2)):
        assert pushforward(INV, eta(0, E(q))) == eta(0, E(-q))
    assert pushforward(INV, eta(0, ZERO)) is INFINITY_POINT
    assert pushforward(INV, INFINITY_POINT) == eta(0, ZERO)
    ident = RationalMap.polynomial(0, 1)
    for x in (eta(F(3, 4), E(F(1, 3))), eta(5, ZERO)):
        assert pushforward(ident, x) == x


def test_inversion_on_sampled_circle():
    # rationals x with |x| = p^2 satisfy |1/x| = p^-2
    rng = random.Random(0)
    for _ in range(200):
        x = F(rng.choice([1, 3, 5, 7]), 4 * rng.choice([1, 3, 5]))
        assert P2.abs(x) == E(2) and P2.abs(1 / x) == E(-2)
    assert pushforward(INV, eta(0, E(2))) == eta(0, E(-2))


def test_constant_map_rejected():
    with pytest.raises(ValidationError):
        RationalMap(Polynomial.of(3), Polynomial.of(1))


def test_pole_and_zero_in_one_disc():
    # (T^2 - 1)/T has zeros at +-1 and a pole at 0, all in D(0, 1)
    g = RationalMap(Polynomial.of(-1, 0, 1), Polynomial.of(0, 1))
    with pytest.raises(UnsupportedConfiguration):
        pushforward(g, eta(0, ONE))
    # Mobius maps never need a chart
    assert pushforward(RationalMap(Polynomial.of(-1, 1), Polynomial.of(0, 1)), eta(0, ONE)) == eta(0, ONE)


def test_mobius_compose_inverse():
    m = Mobius(2, 1, 1, 3)
    x = eta(F(5, 3), E(-4))
    assert m.inverse().push(m.push(x, P2), P2) == x


def test_locus_examples():
    rep = multiplicity_locus(T2, 2, cfg=P2)
    assert set_equal(rep.locus, RadiusThreshold(E(-1)), P2)
    rep1 = multiplicity_locus(T2, 1, cfg=P2)
    assert set_equal(rep1.locus, ~RadiusThreshold(E(-1)), P2)
    rep3 = multiplicity_locus(T3, 3, cfg=P2)
    assert set_equal(rep3.locus, RadiusThreshold(ONE), P2)
    with pytest.raises(DomainError):
        multiplicity_locus(INV, 1, cfg=P2)


def test_locus_partition_and_agreement():
    h = RationalMap.polynomial(0, -3, 0, 1)
    region = [B2(F(0), E(-4), E(4))]
    loci = [multiplicity_locus(h, d, region, P2).locus for d in (1, 2, 3)]
    assert pairwise_disjoint(loci, P2)
    assert set_equal(Union(tuple(loci)), normalize(Union(tuple(region)), P2), P2)
    pts = [x for x in grid_points(P2) if region[0].member(x)]
    assert pts
    for x in pts:
        d = local_degree(h, x)
        assert all(loc.member(x) == (d == k) for k, loc in zip((1, 2, 3), loci))


def test_locus_residual_mode():
    # the derivative 3T^2 + 2 does not split over Q
    h = RationalMap.polynomial(0, 2, 0, 1)
    rep = multiplicity_locus(h, 3, cfg=P2)
    assert rep.residual and rep.locus is None and rep.samples
    assert all(flag == (local_degree(h, x) == 3) for x, flag in rep.samples)


def test_fiber_examples():
    res = fiber_count(T2, eta(1, E(-3)))
    assert res["count"] == 2
    assert set(map(repr, res["fiber"])) == {repr(eta(1, E(-2))), repr(eta(-1, E(-2)))}
    res = fiber_count(T2, eta(0, E(-2)), centers=[0])
    assert res["count"] == 1 and res["fiber"][0] == eta(0, E(-1))
    res = fiber_count(T2, eta(0, ZERO))
    assert res["count"] == 1 and res["degrees"] == [2]


def test_fiber_needs_rational_centres():
    # T^3 - 8 has the irrational roots 2w, 2w^2 far apart from 2 when p = 2
    with pytest.raises(IncompleteOracleError):
        fiber_count(T3, eta(8, ZERO))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(-16, 16), st.integers(1, 4), st.integers(-24, 12))
def test_degree_sum_square_maps(p, m, d, k):
    cfg = FieldConfig(p)
    for h in (T2, RationalMap.polynomial(-1, 0, 1)):
        y = pushforward(h, eta(F(m, d), E(F(k, 4)), cfg))
        res = fiber_count(h, y)
        assert sum(res["degrees"]) == 2


@settings(deadline=None)
@given(bpoints())
def test_pushforward_matches_skeleton_monomials(x):
    h = Polynomial.of(1, -2, 0, 1)
    if x.r.is_zero:
        return
    pieces = skeleton_monomial(h, x.a, E(x.r.q - 2), E(x.r.q + 2), P2)
    for piece in pieces:
        for k in range(1, 11):
            t = E(piece.lo.q + (piece.hi.q - piece.lo.q) * F(k, 11))
            y = pushforward(RationalMap(h), eta(x.a, t))
            assert y.r == piece.m(t)
