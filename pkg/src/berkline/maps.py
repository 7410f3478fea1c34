"""Rational self-maps of P^1 acting on type-1/2 points."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bline import DEFAULT_FIELD, INFINITY_POINT, BPoint
from .bradial import (
    B1,
    Brick,
    Inter,
    Predicate,
    RadialSet,
    Term,
    normalize,
)
from .newton import (
    DegenerateImageError,
    IncompleteOracleError,
    Polynomial,
    dominant_index,
    image_radius,
    poly_divmod,
    poly_gcd,
    rational_factorization,
    rational_roots,
)
from .valuation import (
    INF,
    ONE,
    ZERO,
    DomainError,
    FieldConfig,
    KernelError,
    Radius,
    ValidationError,
    as_fraction,
    fmt_rational,
)

Point = Union[BPoint, type(INFINITY_POINT)]


class UnsupportedConfiguration(KernelError):
    """The requested computation needs data outside the rational backend."""


def _is_inf(y) -> bool:
    return y is INFINITY_POINT


def invert_point(y, cfg: FieldConfig = DEFAULT_FIELD):
    """Image of a point under T -> 1/T."""
    if _is_inf(y):
        return BPoint(Fraction(0), ZERO, cfg)
    d = cfg.abs(y.a)
    if y.r.is_zero and y.a == 0:
        return INFINITY_POINT
    if y.r < d:
        return BPoint(1 / y.a, y.r / (d * d), cfg)
    return BPoint(Fraction(0), ONE / y.r, cfg)


@dataclass(frozen=True)
class Mobius:
    """T -> (aT + b) / (cT + d) with rational coefficients."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, as_fraction(getattr(self, k)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValidationError("degenerate Mobius map")

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(1, 0, 0, 1)

    @staticmethod
    def affine(scale, shift=0) -> "Mobius":
        return Mobius(as_fraction(scale), as_fraction(shift), 0, 1)

    def compose(self, other: "Mobius") -> "Mobius":
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def value(self, x) -> Union[Fraction, object]:
        if _is_inf(x):
            return INFINITY_POINT if self.c == 0 else self.a / self.c
        x = as_fraction(x)
        den = self.c * x + self.d
        if den == 0:
            return INFINITY_POINT
        return (self.a * x + self.b) / den

    def push(self, y, cfg: Optional[FieldConfig] = None):
        cfg = cfg or (y.cfg if isinstance(y, BPoint) else DEFAULT_FIELD)
        if _is_inf(y):
            v = self.value(y)
            return v if _is_inf(v) else BPoint(v, ZERO, cfg)
        if self.c == 0:
            k = self.a / self.d
            return BPoint(k * y.a + self.b / self.d, cfg.abs(k) * y.r, cfg)
        # M(T) = a/c + k / (T + d/c)
        k = (self.b * self.c - self.a * self.d) / (self.c * self.c)
        z = invert_point(BPoint(y.a + self.d / self.c, y.r, cfg), cfg)
        if _is_inf(z):
            return INFINITY_POINT
        return BPoint(k * z.a + self.a / self.c, cfg.abs(k) * z.r, cfg)

    def as_map(self) -> "RationalMap":
        return RationalMap(Polynomial.of(self.b, self.a), Polynomial.of(self.d, self.c))

    def to_json(self):
        return [fmt_rational(x) for x in (self.a, self.b, self.c, self.d)]

    @staticmethod
    def from_json(obj) -> "Mobius":
        return Mobius(*[as_fraction(str(x)) for x in obj])


@dataclass(frozen=True)
class RationalMap:
    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial.of(1))

    def __post_init__(self):
        if self.den.is_zero():
            raise ValidationError("denominator is zero")
        num, den = self.num, self.den
        g = poly_gcd(num, den) if not num.is_zero() else den
        if g.degree > 0:
            num, _ = poly_divmod(num, g)
            den, _ = poly_divmod(den, g)
        lead = den.coeffs[-1]
        object.__setattr__(self, "num", num * (1 / lead))
        object.__setattr__(self, "den", den * (1 / lead))
        if self.num.is_constant() and self.den.is_constant():
            raise ValidationError("constant map")

    @staticmethod
    def polynomial(*coeffs) -> "RationalMap":
        return RationalMap(Polynomial.of(*coeffs))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def mobius(self) -> Optional[Mobius]:
        if self.degree != 1:
            return None
        return Mobius(self.num.coeff(1), self.num.coeff(0), self.den.coeff(1), self.den.coeff(0))

    def value(self, x):
        if _is_inf(x):
            if self.num.degree > self.den.degree:
                return INFINITY_POINT
            if self.num.degree < self.den.degree:
                return Fraction(0)
            return self.num.coeffs[-1] / self.den.coeffs[-1]
        dv = self.den(x)
        if dv == 0:
            return INFINITY_POINT
        return self.num(x) / dv

    def inverted_source(self) -> "RationalMap":
        """h(1/T) as a rational map."""
        n = self.degree
        rev = lambda p: Polynomial(tuple(p.coeff(n - i) for i in range(n + 1)))
        return RationalMap(rev(self.num), rev(self.den))

    def reciprocal(self) -> "RationalMap":
        return RationalMap(self.den, self.num)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner."""
        n = self.degree
        N, D = inner.num, inner.den
        num = Polynomial(())
        den = Polynomial(())
        for i in range(n + 1):
            term = (N**i) * (D ** (n - i))
            num = num + term * self.num.coeff(i)
            den = den + term * self.den.coeff(i)
        return RationalMap(num, den)

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(obj) -> "RationalMap":
        try:
            num = Polynomial.from_json(obj["num"])
            den = Polynomial.from_json(obj.get("den", {"coeffs": ["1"]}))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad map {obj!r}") from exc
        return RationalMap(num, den)


# --------------------------------------------------------------------------
# local expansions
# --------------------------------------------------------------------------


def _no_zero_in_disc(f: Polynomial, a, r: Radius, cfg: FieldConfig) -> bool:
    c = f.recenter(a)
    c0 = cfg.abs(c.coeff(0))
    if c0.is_zero:
        return False
    return image_radius(c, r, cfg) < c0


def _expansion(h: RationalMap, a: Fraction, r: Radius, cfg: FieldConfig):
    """(centre value, P, scale) with h(a+u) - h(a) = P(u) / (D(a) D(a+u)).

    Requires the denominator to have no zero in D(a, r); the image radius is
    max |P_i| r^i / scale with scale = |D(a)|^2.
    """
    da = h.den(a)
    na = h.num(a)
    P = h.num.recenter(a) * da - h.den.recenter(a) * na
    return na / da, P, cfg.abs(da) * cfg.abs(da)


def _chart(h: RationalMap, x: BPoint):
    """Pick a chart without poles: returns (inverted?, expansion)."""
    cfg = x.cfg
    if _no_zero_in_disc(h.den, x.a, x.r, cfg):
        return False, _expansion(h, x.a, x.r, cfg)
    if _no_zero_in_disc(h.num, x.a, x.r, cfg):
        return True, _expansion(h.reciprocal(), x.a, x.r, cfg)
    raise UnsupportedConfiguration(
        f"both a zero and a pole of the map lie in D({fmt_rational(x.a)}, {x.r})"
    )


def pushforward(h: RationalMap, x, cfg: Optional[FieldConfig] = None):
    cfg = cfg or (x.cfg if isinstance(x, BPoint) else DEFAULT_FIELD)
    if _is_inf(x):
        v = h.value(x)
        return v if _is_inf(v) else BPoint(v, ZERO, cfg)
    m = h.mobius()
    if m is not None:
        return m.push(x, cfg)
    if x.r.is_zero:
        v = h.value(x.a)
        return v if _is_inf(v) else BPoint(v, ZERO, cfg)
    inverted, (b, P, scale) = _chart(h, x)
    if P.is_zero():
        raise DegenerateImageError("constant map")
    s = image_radius(P, x.r, cfg) / scale
    y = BPoint(b, s, cfg)
    return invert_point(y, cfg) if inverted else y


def local_degree(h: RationalMap, x) -> int:
    if _is_inf(x):
        return local_degree(h.inverted_source(), BPoint(Fraction(0), ZERO))
    if x.r.is_zero:
        if h.den(x.a) == 0:
            P = h.reciprocal()
            _, Q, _ = _expansion(P, x.a, ZERO, x.cfg)
            return dominant_index(Q, ZERO, x.cfg)
        _, Q, _ = _expansion(h, x.a, ZERO, x.cfg)
        return dominant_index(Q, ZERO, x.cfg)
    _, (_, P, _) = _chart(h, x)
    return dominant_index(P, x.r, x.cfg)


# --------------------------------------------------------------------------
# multiplicity loci
# --------------------------------------------------------------------------


def taylor_coefficient_polys(h: Polynomial) -> List[Polynomial]:
    """c_i(T) = h^(i)(T) / i!, so that h(T + u) = sum c_i(T) u^i."""
    n = h.degree
    out = []
    for i in range(n + 1):
        cs = [math.comb(j, i) * h.coeff(j) for j in range(i, n + 1)]
        out.append(Polynomial(tuple(cs)))
    return out


@dataclass(frozen=True)
class DegreePredicate(Predicate):
    """The set of points where a polynomial has local degree d.

    Each Taylor coefficient is stored as (|lead|, ((root, mult), ...)), so its
    sup-norm on eta(e, r) is |lead| * prod D(root)^mult.
    """

    d: int
    factors: Tuple[Tuple[int, Radius, Tuple[Tuple[Fraction, int], ...]], ...]

    @staticmethod
    def build(h: Polynomial, d: int, cfg: FieldConfig = DEFAULT_FIELD) -> Optional["DegreePredicate"]:
        facs = []
        for i, c in enumerate(taylor_coefficient_polys(h)):
            if i == 0 or c.is_zero():
                continue
            fz = rational_factorization(c)
            if fz is None:
                return None
            lead, roots = fz
            facs.append((i, cfg.abs(lead), tuple(roots)))
        return DegreePredicate(d, tuple(facs))

    def centers(self):
        for _, _, roots in self.factors:
            for b, _ in roots:
                yield b

    def terms(self):
        fs = self.factors
        for x in range(len(fs)):
            for y in range(x + 1, len(fs)):
                i, li, ri = fs[x]
                j, lj, rj = fs[y]
                k = j - i
                exps: Dict[Fraction, Fraction] = {}
                for b, m in ri:
                    exps[b] = exps.get(b, Fraction(0)) + Fraction(m, k)
                for b, m in rj:
                    exps[b] = exps.get(b, Fraction(0)) - Fraction(m, k)
                rho = (li / lj) ** Fraction(1, k)
                yield Term(rho, tuple(sorted((b, e) for b, e in exps.items() if e)))

    def degree(self, D, r: Radius) -> int:
        best, arg = None, None
        for i, lead, roots in self.factors:
            v = lead
            for b, m in roots:
                v = v * D(b) ** m
            if r.is_zero:
                if not v.is_zero:
                    return i
                continue
            v = v * r**i
            if best is None or best <= v:
                best, arg = v, i
        return arg

    def holds(self, D, r):
        return self.degree(D, r) == self.d


@dataclass
class LocusReport:
    d: int
    locus: Optional[RadialSet]
    region: List[Brick]
    residual: bool = False
    samples: List[Tuple[BPoint, bool]] = field(default_factory=list)

    def to_json(self):
        return {
            "d": self.d,
            "locus": None if self.locus is None else self.locus.to_json(),
            "region": [b.to_json() for b in self.region],
            "residual": self.residual,
        }


def grid_points(cfg: FieldConfig = DEFAULT_FIELD) -> List[BPoint]:
    """a = m/8 with |m| <= 16, r = p^q with q in [-6, 3] step 1/6, plus r = 0."""
    pts = []
    for m in range(-16, 17):
        a = Fraction(m, 8)
        pts.append(BPoint(a, ZERO, cfg))
        for k in range(-36, 19):
            pts.append(BPoint(a, Radius.exp(Fraction(k, 6)), cfg))
    return pts


def multiplicity_locus(
    h: RationalMap, d: int, region: Optional[Sequence[Brick]] = None, cfg: FieldConfig = DEFAULT_FIELD
) -> LocusReport:
    if not h.is_polynomial:
        raise DomainError("multiplicity loci are computed for polynomial maps")
    poly = h.num
    region = list(region) if region else [B1(Fraction(0), INF)]
    pred = DegreePredicate.build(poly, d, cfg)
    if pred is None:
        samples = []
        for x in grid_points(cfg):
            if any(b.member(x) for b in region):
                samples.append((x, local_degree(h, x) == d))
        return LocusReport(d, None, region, residual=True, samples=samples)
    from .bradial import Union as RUnion

    locus = normalize(Inter((pred, RUnion(tuple(region)))), cfg)
    return LocusReport(d, locus, region)


# --------------------------------------------------------------------------
# fibres
# --------------------------------------------------------------------------


def _preimage_radius(h: RationalMap, alpha: Fraction, s: Radius, cfg: FieldConfig) -> Radius:
    """The r with h(eta(alpha, r)) of radius s (image radius is increasing in r)."""
    _, P, scale = _expansion(h, alpha, ZERO, cfg)
    best = None
    target = s * scale
    for i, c in enumerate(P.coeffs):
        if i == 0 or not c:
            continue
        r = (target / cfg.abs(c)) ** Fraction(1, i)
        if best is None or r < best:
            best = r
    if best is None:
        raise DegenerateImageError("constant map")
    return best


def fiber_count(
    h: RationalMap, y: BPoint, centers: Optional[Sequence] = None, check: bool = True
) -> Dict[str, object]:
    """Points of h^{-1}(y) seen from declared (or rational) preimage centres."""
    cfg = y.cfg
    if not isinstance(y, BPoint):
        raise DomainError("fibres over infinity are not supported")
    if centers is None:
        cands = [a for a, _ in rational_roots(h.num - h.den * y.a)]
    else:
        cands = [as_fraction(c) for c in centers]
    fiber: List[BPoint] = []
    degrees: List[int] = []
    if y.r.is_zero:
        for a in cands:
            if h.den(a) == 0 or h.value(a) != y.a:
                continue
            x = BPoint(a, ZERO, cfg)
            if x in fiber:
                continue
            fiber.append(x)
            degrees.append(local_degree(h, x))
    else:
        for a in cands:
            if h.den(a) == 0:
                continue
            if cfg.abs(h.value(a) - y.a) > y.r:
                continue
            x = BPoint(a, _preimage_radius(h, a, y.r, cfg), cfg)
            if pushforward(h, x) != y:
                raise KernelError(f"preimage radius mismatch at {x!r}")
            if x in fiber:
                continue
            fiber.append(x)
            degrees.append(local_degree(h, x))
    total = sum(degrees)
    if check and total < h.degree:
        raise IncompleteOracleError(
            f"declared centres give degree sum {total} < {h.degree}; the fibre has "
            "points with non-rational centres"
        )
    if total > h.degree:
        raise KernelError(f"degree sum {total} exceeds deg h = {h.degree}")
    return {"count": len(fiber), "fiber": fiber, "degrees": degrees}
