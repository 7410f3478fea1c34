"""Type-1/2 points of the Berkovich line, modelled as closed discs."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .valuation import (
    ONE,
    DomainError,
    FieldConfig,
    Radius,
    ValidationError,
    as_fraction,
    fmt_rational,
    rmax,
)

DEFAULT_FIELD = FieldConfig(2)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def canonical_center(a: Fraction, r: Radius, cfg: FieldConfig) -> Fraction:
    """A representative of D(a, r) that depends only on the disc.

    For r = p^q the disc is the set of x with v(x - a) >= ceil(-q); the
    canonical centre keeps the p-adic digits of ``a`` below that level.
    """
    if r.is_zero:
        return a
    if r.is_inf:
        return Fraction(0)
    n = _ceil(-r.q)
    v = cfg.vp(a)
    if v is None or v >= n:
        return Fraction(0)
    u = a / Fraction(cfg.p) ** v
    mod = cfg.p ** (n - v)
    digits = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(digits) * Fraction(cfg.p) ** v


@dataclass(frozen=True, eq=False)
class BPoint:
    """The point eta(a, r): the closed disc of centre ``a`` and radius ``r``."""

    a: Fraction
    r: Radius
    cfg: FieldConfig = DEFAULT_FIELD
    _canon: Fraction = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        if self.r.is_inf:
            raise DomainError("a BPoint has finite radius")
        object.__setattr__(self, "_canon", canonical_center(self.a, self.r, self.cfg))

    @property
    def type(self) -> int:
        return 1 if self.r.is_zero else 2

    @property
    def canon(self) -> Fraction:
        return self._canon

    def dist(self, b) -> Radius:
        """|a - b| for the stored centre."""
        return self.cfg.abs(self.a - as_fraction(b))

    def seminorm(self, b) -> Radius:
        """|T - b| at this point, i.e. max(|a - b|, r)."""
        d = self.dist(b)
        return d if self.r < d else self.r

    def contains(self, b) -> bool:
        """Whether the rational b lies in the closed disc D(a, r)."""
        return self.dist(b) <= self.r

    def __eq__(self, other) -> bool:
        if not isinstance(other, BPoint):
            return NotImplemented
        return self.r == other.r and self.cfg.abs(self.a - other.a) <= self.r

    def __hash__(self) -> int:
        return hash((self.r, self._canon))

    def le(self, other: "BPoint") -> bool:
        """D(self) is contained in D(other)."""
        return self.r <= other.r and self.cfg.abs(self.a - other.a) <= other.r

    def sort_key(self):
        return (self.r, self._canon)

    def __repr__(self) -> str:
        return f"eta({self.a}, {self.r})"

    def label(self) -> str:
        if self.r.is_zero:
            return f"η({fmt_rational(self.a)}, 0)"
        return f"η({fmt_rational(self.a)}, p^{fmt_rational(self.r.q)})"

    def to_json(self):
        return {"a": fmt_rational(self.a), "r": self.r.to_json()}

    @staticmethod
    def from_json(obj, cfg: FieldConfig = DEFAULT_FIELD) -> "BPoint":
        try:
            return BPoint(as_fraction(str(obj["a"])), Radius.from_json(obj["r"]), cfg)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad point {obj!r}: {exc}") from exc


class _Infinity:
    """The type-1 point at infinity of P^1 (never a BPoint)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "inf"

    def to_json(self):
        return "inf"


INFINITY_POINT = _Infinity()


def eta(a, r: Radius, cfg: FieldConfig = DEFAULT_FIELD) -> BPoint:
    return BPoint(as_fraction(a), r, cfg)


def point_eq_type(x: BPoint, y: BPoint) -> Dict[str, object]:
    return {"equal": x == y, "type_x": x.type}


def join(x: BPoint, y: BPoint) -> BPoint:
    return BPoint(x.a, rmax(x.r, y.r, x.dist(y.a)), x.cfg)


def disc_rel(x: BPoint, y: BPoint) -> Dict[str, object]:
    j = join(x, y)
    d = x.dist(y.a)
    if x == y:
        rel = "equal"
    elif x.le(y):
        rel = "x_inside_y"
    elif y.le(x):
        rel = "y_inside_x"
    else:
        rel = "disjoint"
    if rel == "x_inside_y":
        strict = d < y.r and x.r < y.r
    elif rel == "y_inside_x":
        strict = d < x.r and y.r < x.r
    else:
        strict = False
    return {"join": j, "relation": rel, "strict": strict}


@dataclass(frozen=True)
class Residue:
    """An element of F_p, or the generic point of the residue line."""

    value: Optional[int]
    p: int

    @property
    def generic(self) -> bool:
        return self.value is None

    def __add__(self, other: "Residue") -> "Residue":
        return Residue((self.value + other.value) % self.p, self.p)

    def __mul__(self, other: "Residue") -> "Residue":
        return Residue((self.value * other.value) % self.p, self.p)

    def __repr__(self) -> str:
        return "generic" if self.generic else str(self.value)


def red(x: BPoint) -> Residue:
    """Reduction of a point of the closed unit disc other than eta(0, 1)."""
    if not (x.dist(0) <= ONE and x.r < ONE):
        raise DomainError(f"red is undefined at {x!r}")
    return Residue(x.cfg.residue(x.a), x.cfg.p)


@dataclass
class DiscTree:
    nodes: List[BPoint]
    parent: Dict[int, Optional[int]]

    def root(self) -> BPoint:
        return self.nodes[-1]

    def children(self, i: int) -> List[int]:
        return [j for j, pj in self.parent.items() if pj == i]

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, pi) for i, pi in sorted(self.parent.items()) if pi is not None]

    def to_dot(self) -> str:
        lines = ["digraph disctree {"]
        for i, n in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{n.label()}"];')
        for i, pi in self.edges():
            lines.append(f"  n{pi} -> n{i};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "nodes": [n.to_json() for n in self.nodes],
            "parent": [self.parent[i] for i in range(len(self.nodes))],
        }


def join_closure(pts: Iterable[BPoint]) -> List[BPoint]:
    """Sorted join-closed hull of a finite set (by radius, then centre)."""
    out = set(pts)
    if not out:
        raise ValidationError("span_tree needs at least one point")
    frontier = list(out)
    while frontier:
        new = []
        cur = list(out)
        for x in frontier:
            for y in cur:
                j = join(x, y)
                if j not in out:
                    out.add(j)
                    new.append(j)
        frontier = new
    return sorted(out, key=BPoint.sort_key)


def span_tree(pts: Iterable[BPoint]) -> DiscTree:
    nodes = join_closure(pts)
    parent: Dict[int, Optional[int]] = {}
    for i, x in enumerate(nodes):
        best = None
        for j, y in enumerate(nodes):
            if j != i and x.le(y) and not x == y:
                if best is None or y.le(nodes[best]):
                    best = j
        parent[i] = best
    return DiscTree(nodes, parent)
