"""Newton polygons of polynomials over Q with the p-adic valuation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .bline import DEFAULT_FIELD, BPoint
from .valuation import (
    ZERO,
    DomainError,
    FieldConfig,
    KernelError,
    Monomial,
    Radius,
    ValidationError,
    as_fraction,
    between,
    fmt_rational,
)


class DegenerateImageError(DomainError):
    """A constant map has no disc image."""


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with rational coefficients, ascending degree."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        cs = [as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def of(*cs) -> "Polynomial":
        return Polynomial(tuple(as_fraction(c) for c in cs))

    @staticmethod
    def monomial(n: int, c=1) -> "Polynomial":
        return Polynomial((Fraction(0),) * n + (as_fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            k = as_fraction(other)
            return Polynomial(tuple(c * k for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.of(1)
        for _ in range(n):
            out = out * self
        return out

    def compose(self, inner: "Polynomial") -> "Polynomial":
        acc = Polynomial(())
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.of(c)
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def recenter(self, a) -> "Polynomial":
        """Coefficients of h(a + u) in u, by repeated synthetic division."""
        a = as_fraction(a)
        work = list(self.coeffs)
        out = []
        while work:
            # divide by (T - a): the remainder is the next Taylor coefficient
            rem = Fraction(0)
            quot = [Fraction(0)] * (len(work) - 1)
            for i in range(len(work) - 1, -1, -1):
                rem = rem * a + work[i]
                if i > 0:
                    quot[i - 1] = rem
            out.append(rem)
            work = quot
        return Polynomial(tuple(out))

    def to_sympy(self, x):
        return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(self.coeffs))

    def to_json(self):
        return {"coeffs": [fmt_rational(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj) -> "Polynomial":
        try:
            cs = obj["coeffs"] if isinstance(obj, dict) else obj
            return Polynomial(tuple(as_fraction(str(c)) for c in cs))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad polynomial {obj!r}: {exc}") from exc

    def __repr__(self) -> str:
        terms = [f"{c}*T^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v(c_i)); ``None`` valuations are omitted."""

    vertices: Tuple[Tuple[int, Fraction], ...]

    def slopes(self) -> List[Tuple[Fraction, int]]:
        """(slope, horizontal length) of each edge, left to right."""
        out = []
        for (i, v), (j, w) in zip(self.vertices, self.vertices[1:]):
            out.append(((w - v) / (j - i), j - i))
        return out

    def to_rows(self) -> List[Tuple[int, str]]:
        return [(i, fmt_rational(v)) for i, v in self.vertices]


def lower_hull(points: Sequence[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    """Monotone-chain lower hull of points sorted by abscissa."""
    hull: List[Tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(h: Polynomial, cfg: FieldConfig = DEFAULT_FIELD) -> NewtonPolygon:
    if h.is_zero():
        raise DomainError("the zero polynomial has no Newton polygon")
    pts = [(i, Fraction(cfg.vp(c))) for i, c in enumerate(h.coeffs) if c]
    return NewtonPolygon(tuple(lower_hull(pts)))


def polygon_roots(h: Polynomial, cfg: FieldConfig = DEFAULT_FIELD) -> Dict[str, object]:
    """Root valuations with multiplicity; ``None`` stands for the root 0."""
    poly = newton_polygon(h, cfg)
    vals: List[Optional[Fraction]] = []
    ord0 = poly.vertices[0][0]
    vals.extend([None] * ord0)
    for slope, length in poly.slopes():
        vals.extend([-slope] * length)
    return {"polygon": poly, "root_valuations": vals}


def _abs_coeffs(c: Polynomial, cfg: FieldConfig) -> List[Radius]:
    return [cfg.abs(x) for x in c.coeffs]


def image_radius(c: Polynomial, r: Radius, cfg: FieldConfig = DEFAULT_FIELD) -> Radius:
    """max_{i >= 1} |c_i| r^i for a recentred expansion c."""
    best = ZERO
    for i, x in enumerate(c.coeffs):
        if i == 0 or not x:
            continue
        v = cfg.abs(x) * r**i
        if best < v:
            best = v
    return best


def dominant_index(c: Polynomial, r: Radius, cfg: FieldConfig = DEFAULT_FIELD) -> int:
    """Largest i >= 1 attaining max |c_i| r^i (vanishing order when r = 0)."""
    nz = [i for i, x in enumerate(c.coeffs) if i >= 1 and x]
    if not nz:
        raise DomainError("constant map has no local degree")
    if r.is_zero:
        return nz[0]
    best, arg = ZERO, nz[0]
    for i in nz:
        v = cfg.abs(c.coeffs[i]) * r**i
        if best <= v:
            best, arg = v, i
    return arg


def disc_image(h: Polynomial, a, r: Radius, cfg: FieldConfig = DEFAULT_FIELD) -> BPoint:
    if h.is_constant():
        raise DegenerateImageError("constant polynomial has a degenerate image")
    if r.is_inf:
        raise DomainError("disc radius must be finite")
    c = h.recenter(a)
    return BPoint(c.coeff(0), image_radius(c, r, cfg), cfg)


def local_degree(h: Polynomial, x: BPoint) -> int:
    if h.is_constant():
        raise DomainError("constant polynomial has no local degree")
    return dominant_index(h.recenter(x.a), x.r, x.cfg)


@dataclass(frozen=True)
class SkeletonPiece:
    lo: Radius
    hi: Radius
    center: Fraction
    m: Monomial
    degree: int

    def to_json(self):
        return {
            "interval": [self.lo.to_json(), self.hi.to_json()],
            "image_center": fmt_rational(self.center),
            "monomial": self.m.to_json(),
            "degree": self.degree,
        }


def envelope(monos: Dict[int, Monomial], s1: Radius, s2: Radius) -> List[Tuple[Radius, Radius, int]]:
    """Pieces of (s1, s2) on which one monomial dominates (largest index on ties).

    ``monos`` maps an index to its monomial; returns (lo, hi, index) runs.
    """
    cuts = set()
    for (i, m1), (j, m2) in itertools.combinations(monos.items(), 2):
        x = m1.crossing(m2)
        if x is not None and s1 < x < s2:
            cuts.add(x)
    bounds = [s1] + sorted(cuts) + [s2]
    runs: List[Tuple[Radius, Radius, int]] = []
    for lo, hi in zip(bounds, bounds[1:]):
        t = between(lo, hi)
        best, arg = None, None
        for i in sorted(monos):
            v = monos[i](t)
            if best is None or best <= v:
                best, arg = v, i
        if runs and runs[-1][2] == arg:
            runs[-1] = (runs[-1][0], hi, arg)
        else:
            runs.append((lo, hi, arg))
    return runs


def skeleton_monomial(
    h: Polynomial, a, s1: Radius, s2: Radius, cfg: FieldConfig = DEFAULT_FIELD
) -> List[SkeletonPiece]:
    """Image radius of eta(a, t) for s1 < t < s2 as a piecewise monomial."""
    if h.is_constant():
        raise DegenerateImageError("constant polynomial has a degenerate image")
    if not s1 < s2:
        raise DomainError("empty interval")
    c = h.recenter(a)
    monos = {
        i: Monomial(cfg.abs(x), Fraction(i)) for i, x in enumerate(c.coeffs) if i >= 1 and x
    }
    return [
        SkeletonPiece(lo, hi, c.coeff(0), monos[i], i) for lo, hi, i in envelope(monos, s1, s2)
    ]


# --------------------------------------------------------------------------
# exact algebra through sympy
# --------------------------------------------------------------------------

_X = sympy.Symbol("x")


def rational_roots(h: Polynomial) -> List[Tuple[Fraction, int]]:
    """Rational roots with multiplicities, sorted."""
    if h.is_zero():
        raise DomainError("the zero polynomial has every root")
    if h.is_constant():
        return []
    poly = sympy.Poly(h.to_sympy(_X), _X, domain="QQ")
    out = []
    for root, mult in poly.ground_roots().items():
        q = sympy.Rational(root)
        out.append((Fraction(int(q.p), int(q.q)), int(mult)))
    return sorted(out)


def rational_factorization(h: Polynomial):
    """(leading coefficient, [(root, multiplicity)]) when h splits over Q, else None."""
    if h.is_zero():
        return None
    roots = rational_roots(h)
    if sum(m for _, m in roots) != h.degree:
        return None
    return h.coeffs[-1], roots


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    d = sympy.Poly(f.to_sympy(_X), _X, domain="QQ").gcd(sympy.Poly(g.to_sympy(_X), _X, domain="QQ"))
    return Polynomial(tuple(Fraction(int(c.p), int(c.q)) for c in reversed(d.all_coeffs())))


def poly_divmod(f: Polynomial, g: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f.coeffs)
    q = [Fraction(0)] * max(len(rem) - len(g.coeffs) + 1, 0)
    lead = g.coeffs[-1]
    for i in range(len(q) - 1, -1, -1):
        k = rem[i + len(g.coeffs) - 1] / lead
        q[i] = k
        for j, c in enumerate(g.coeffs):
            rem[i + j] -= k * c
    return Polynomial(tuple(q)), Polynomial(tuple(rem))


class IncompleteOracleError(KernelError):
    """Declared preimage centres do not account for the whole fibre."""
