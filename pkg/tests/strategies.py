"""Hypothesis strategies for exact values."""

from fractions import Fraction

from hypothesis import strategies as st

from berkline.bline import BPoint
from berkline.valuation import INF, ZERO, FieldConfig, Radius

P2 = FieldConfig(2)

rationals = st.builds(
    Fraction,
    st.integers(-200, 200),
    st.integers(1, 64),
)
nonzero_rationals = rationals.filter(lambda x: x != 0)
exponents = st.integers(-36, 36).map(lambda k: Fraction(k, 6))
exp_radii = exponents.map(Radius.exp)
radii = st.one_of(st.just(ZERO), st.just(INF), exp_radii)
finite_radii = st.one_of(st.just(ZERO), exp_radii)
centers = st.builds(lambda m, j: Fraction(m, 2**j), st.integers(-16, 16), st.integers(0, 3))


@st.composite
def bpoints(draw, cfg: FieldConfig = P2):
    a = draw(st.builds(lambda m, j: Fraction(m, 2**j), st.integers(-64, 64), st.integers(0, 5)))
    r = draw(st.one_of(st.just(ZERO), st.integers(-48, 48).map(lambda k: Radius.exp(Fraction(k, 6)))))
    return BPoint(a, r, cfg)
