"""Radial subsets of a triangulated domain and their definable images."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import portion as P

from .bline import BPoint
from .bradial import (
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    Diff,
    Inter,
    Predicate,
    RadialSet,
    Term,
    dterm,
    is_empty,
    normalize,
)
from .bradial import Union as RUnion
from .facade import Encoded, Facade
from .valuation import (
    ONE,
    ZERO,
    Monomial,
    Radius,
    ValidationError,
)

_ORIGIN = Fraction(0)


def _cmp(lo: Radius, x: Radius, strict: bool) -> bool:
    return lo < x if strict else lo <= x


def _interval(lo: Radius, hi: Radius, lo_strict: bool, hi_strict: bool) -> P.Interval:
    return P.closed(lo, hi).replace(
        left=P.OPEN if lo_strict else P.CLOSED, right=P.OPEN if hi_strict else P.CLOSED
    )


def _bound_json(r: Radius, strict: bool):
    return {"value": r.to_json(), "strict": strict}


# --------------------------------------------------------------------------
# pieces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexCyl:
    """{y : tau(y) = x, lo <1 rho(y) <2 hi} for a vertex x."""

    vertex: int
    lo: Radius
    hi: Radius
    lo_strict: bool = False
    hi_strict: bool = False

    def __post_init__(self):
        for r in (self.lo, self.hi):
            if r.is_inf or ONE < r:
                raise ValidationError("vertex cylinder bounds lie in [0, 1]")

    def admits(self, rho: Radius) -> bool:
        return _cmp(self.lo, rho, self.lo_strict) and _cmp(rho, self.hi, self.hi_strict)

    def interval(self) -> P.Interval:
        return _interval(self.lo, self.hi, self.lo_strict, self.hi_strict)

    def to_json(self):
        return {
            "kind": "vertex",
            "vertex": self.vertex,
            "lo": _bound_json(self.lo, self.lo_strict),
            "hi": _bound_json(self.hi, self.hi_strict),
        }


@dataclass(frozen=True)
class EdgeBand:
    """{y : tau(y) on edge I at coordinate t in the range, f1(t) <1 rho(y) <2 f2(t)}.

    The tau range is the open interval (t1, t2), or the single coordinate t1
    when ``point`` is set.  Since rho <= 1, a bound above 1 acts as 1.
    """

    edge: int
    f1: Monomial
    f2: Monomial
    t1: Radius
    t2: Radius
    lo_strict: bool = False
    hi_strict: bool = False
    point: bool = False

    def in_range(self, t: Radius) -> bool:
        if self.point:
            return t == self.t1
        return self.t1 < t < self.t2

    def admits(self, t: Radius, rho: Radius) -> bool:
        return (
            self.in_range(t)
            and _cmp(self.f1(t), rho, self.lo_strict)
            and _cmp(rho, self.f2(t), self.hi_strict)
        )

    def to_json(self):
        return {
            "kind": "edge",
            "edge": self.edge,
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
            "lo_strict": self.lo_strict,
            "hi_strict": self.hi_strict,
            "tau": {"point": self.t1.to_json()} if self.point else [self.t1.to_json(), self.t2.to_json()],
        }


Piece = Union[VertexCyl, EdgeBand]


def piece_from_json(obj) -> Piece:
    try:
        if obj["kind"] == "vertex":
            return VertexCyl(
                int(obj["vertex"]),
                Radius.from_json(obj["lo"]["value"]),
                Radius.from_json(obj["hi"]["value"]),
                bool(obj["lo"]["strict"]),
                bool(obj["hi"]["strict"]),
            )
        if obj["kind"] == "edge":
            tau = obj["tau"]
            if isinstance(tau, dict):
                t1 = t2 = Radius.from_json(tau["point"])
                point = True
            else:
                t1, t2 = Radius.from_json(tau[0]), Radius.from_json(tau[1])
                point = False
            return EdgeBand(
                int(obj["edge"]),
                Monomial.from_json(obj["f1"]),
                Monomial.from_json(obj["f2"]),
                t1,
                t2,
                bool(obj.get("lo_strict", False)),
                bool(obj.get("hi_strict", False)),
                point,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad curve piece {obj!r}") from exc
    raise ValidationError(f"unknown curve piece kind {obj.get('kind')!r}")


class CurveExpr:
    """Boolean combinations of curve radial sets (evaluated by normalize_curve)."""

    def __or__(self, other):
        return CurveOp("or", (self, other))

    def __and__(self, other):
        return CurveOp("and", (self, other))

    def __sub__(self, other):
        return CurveOp("diff", (self, other))

    def __xor__(self, other):
        return CurveOp("xor", (self, other))

    def __invert__(self):
        return CurveOp("not", (self,))


@dataclass(frozen=True)
class CurveOp(CurveExpr):
    op: str
    args: Tuple[CurveExpr, ...]


@dataclass(frozen=True)
class CurveRadialSet(CurveExpr):
    pieces: Tuple[Piece, ...] = ()
    tri_key: Optional[tuple] = None

    def to_json(self):
        return {"pieces": [p.to_json() for p in self.pieces]}

    @staticmethod
    def from_json(obj, F: Optional[Facade] = None) -> "CurveRadialSet":
        pieces = obj.get("pieces", []) if isinstance(obj, dict) else obj
        out = CurveRadialSet(tuple(piece_from_json(p) for p in pieces), F.tri.key() if F else None)
        if F is not None:
            check_pieces(F, out)
        return out


def check_pieces(F: Facade, A: CurveRadialSet) -> None:
    if A.tri_key is not None and A.tri_key != F.tri.key():
        raise ValidationError("the set refers to a different triangulation")
    for p in A.pieces:
        if isinstance(p, VertexCyl) and not 0 <= p.vertex < len(F.vertices):
            raise ValidationError(f"no vertex {p.vertex} in the triangulation")
        if isinstance(p, EdgeBand) and not 0 <= p.edge < len(F.edges):
            raise ValidationError(f"no edge {p.edge} in the triangulation")


# --------------------------------------------------------------------------
# rho and membership
# --------------------------------------------------------------------------


def rho_tau(F: Facade, y) -> Tuple[str, int, Radius, Radius]:
    """(part, index, rho, t) where t is the edge coordinate of tau(y) (ONE off edges)."""
    part, i = F.locate(y)
    cfg = F.cfg
    if part == "vertex":
        return part, i, ONE, ONE
    if part == "edge":
        z = F.edges[i].chart.push(y, cfg)
        t = z.seminorm(0)
        return part, i, z.r / t, t
    f = F.tubes[i].f if part == "tube" else F.tubes[i].discs[0]
    z = f.push(y, cfg)
    return part, i, z.r, ONE


def rho_member(F: Facade, y, piece: Piece) -> Dict[str, object]:
    part, i, rho, t = rho_tau(F, y)
    if isinstance(piece, VertexCyl):
        member = part != "edge" and i == piece.vertex and piece.admits(rho)
    else:
        member = part == "edge" and i == piece.edge and piece.admits(t, rho)
    return {"rho": rho, "member": member}


def member(F: Facade, y, A: CurveRadialSet) -> bool:
    part, i, rho, t = rho_tau(F, y)
    for p in A.pieces:
        if isinstance(p, VertexCyl):
            if part != "edge" and i == p.vertex and p.admits(rho):
                return True
        elif part == "edge" and i == p.edge and p.admits(t, rho):
            return True
    return False


# --------------------------------------------------------------------------
# chart predicates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Annulus(Predicate):
    r1: Radius
    r2: Radius

    def centers(self):
        return (_ORIGIN,)

    def thresholds(self):
        return (self.r1, self.r2)

    def terms(self):
        return (dterm(_ORIGIN),)

    def holds(self, D, r):
        return self.r1 < D(_ORIGIN) < self.r2


@dataclass(frozen=True)
class ChartBand(Predicate):
    """An edge band seen in the annulus chart: t = D(0) and r = rho * t."""

    band: EdgeBand
    r1: Radius
    r2: Radius

    def centers(self):
        return (_ORIGIN,)

    def thresholds(self):
        b = self.band
        return (self.r1, self.r2, b.t1, b.t2)

    def terms(self):
        b = self.band
        return (
            dterm(_ORIGIN),
            Term(b.f1.rho, ((_ORIGIN, b.f1.g + 1),)),
            Term(b.f2.rho, ((_ORIGIN, b.f2.g + 1),)),
        )

    def holds(self, D, r):
        t = D(_ORIGIN)
        if not self.r1 < t < self.r2:
            return False
        b = self.band
        if not b.in_range(t):
            return False
        return _cmp(b.f1(t) * t, r, b.lo_strict) and _cmp(r, b.f2(t) * t, b.hi_strict)


# --------------------------------------------------------------------------
# the bijection with definable sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ZCylinder:
    """{(alpha, eta) in Z_x : alpha not in exceptions, lo <1 radius(eta) <2 hi}."""

    vertex: int
    lo: Radius
    hi: Radius
    lo_strict: bool
    hi_strict: bool
    exceptions: Tuple[int, ...] = ()

    def holds(self, alpha: int, eta: BPoint) -> bool:
        if alpha in self.exceptions:
            return False
        return _cmp(self.lo, eta.r, self.lo_strict) and _cmp(eta.r, self.hi, self.hi_strict)

    def saturated(self) -> bool:
        """Membership depends on the radius only, off the exception set."""
        return True

    def to_json(self):
        return {
            "vertex": self.vertex,
            "lo": _bound_json(self.lo, self.lo_strict),
            "hi": _bound_json(self.hi, self.hi_strict),
            "exceptions": list(self.exceptions),
        }


@dataclass
class Definable:
    """Per-chart data of a definable subset of the facade's definable set."""

    vertices: Tuple[int, ...] = ()
    tubes: Tuple[ZCylinder, ...] = ()
    discs: Dict[Tuple[int, int], RadialSet] = field(default_factory=dict)
    edges: Dict[int, RadialSet] = field(default_factory=dict)

    def member(self, e: Encoded) -> bool:
        if e.kind in ("vtx1", "vtx2"):
            return e.index in self.vertices
        if e.kind == "tube":
            return any(z.vertex == e.index and z.holds(e.alpha, e.eta) for z in self.tubes)
        if e.kind == "disc":
            rs = self.discs.get((e.index, e.sub))
            return rs is not None and rs.member(e.eta)
        rs = self.edges.get(e.index)
        return rs is not None and rs.member(e.eta)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "tubes": [z.to_json() for z in self.tubes],
            "discs": [
                {"vertex": v, "sub": i, "set": rs.to_json()} for (v, i), rs in sorted(self.discs.items())
            ],
            "edges": [{"edge": j, "set": rs.to_json()} for j, rs in sorted(self.edges.items())],
        }


def _vertex_universe(F: Facade, i: int) -> P.Interval:
    return P.closed(ZERO, ONE) if i in F.tubes else P.singleton(ONE)


def _edge_pred(F: Facade, A: CurveRadialSet, j: int) -> Predicate:
    e = F.edges[j]
    bands = tuple(ChartBand(p, e.r1, e.r2) for p in A.pieces if isinstance(p, EdgeBand) and p.edge == j)
    return RUnion(bands)


def _vertex_set(F: Facade, A: CurveRadialSet, i: int) -> P.Interval:
    out = P.empty()
    for p in A.pieces:
        if isinstance(p, VertexCyl) and p.vertex == i:
            out |= p.interval()
    return out & _vertex_universe(F, i)


def delta(F: Facade, A: CurveRadialSet) -> Definable:
    check_pieces(F, A)
    flags = []
    tubes = []
    discs = {}
    for i in range(len(F.vertices)):
        rho = _vertex_set(F, A, i)
        if ONE in rho:
            flags.append(i)
        if i not in F.tubes:
            continue
        for iv in rho:
            lo_s = iv.left == P.OPEN
            hi_s = iv.right == P.OPEN
            if iv.upper == ONE:
                hi_s = True
            if iv.lower == ONE:
                continue
            tubes.append(ZCylinder(i, iv.lower, iv.upper, lo_s, hi_s))
        for k in range(len(F.tubes[i].discs)):
            discs[(i, k)] = _disc_pieces(rho & P.closedopen(ZERO, ONE))
    edges = {}
    for j, e in enumerate(F.edges):
        pred = _edge_pred(F, A, j)
        edges[j] = normalize(Inter((pred, Annulus(e.r1, e.r2))), F.cfg, merge=False)
    return Definable(tuple(flags), tuple(tubes), discs, edges)


def _disc_pieces(rho: P.Interval) -> RadialSet:
    """Open-unit-disc pieces with r in the given set."""
    out = []
    for iv in rho:
        if iv.left == P.CLOSED:
            out.append(R6(_ORIGIN, ONE, iv.lower))
        if iv.lower < iv.upper:
            out.append(R7(_ORIGIN, ONE, iv.lower, iv.upper))
            if iv.right == P.CLOSED:
                out.append(R6(_ORIGIN, ONE, iv.upper))
    return RadialSet(tuple(out))


def _edge_bands(j: int, rs: RadialSet) -> List[EdgeBand]:
    """Read chart pieces about 0 back as bands in (t, rho)."""
    out = []
    one = Monomial(ONE, 0)
    for p in rs.pieces:
        if isinstance(p, (R0, R1, R2, R3)) and p.a != 0:
            raise ValidationError(f"edge chart piece {p.kind} is not centred at the origin")
        if isinstance(p, R0):
            out.append(EdgeBand(j, one, one, p.s, p.s, point=True))
        elif isinstance(p, R1):
            out.append(EdgeBand(j, one, one, p.s1, p.s2))
        elif isinstance(p, R2):
            m = Monomial(p.rho1, p.g1 - 1)
            out.append(EdgeBand(j, m, m, p.s1, p.s2))
        elif isinstance(p, R3):
            m1, m2 = Monomial(p.rho1, p.g1 - 1), Monomial(p.rho2, p.g2 - 1)
            out.append(EdgeBand(j, m1, m2, p.s1, p.s2, True, True))
        elif isinstance(p, R4):
            m = Monomial(p.s1 / p.s, 0)
            out.append(EdgeBand(j, m, m, p.s, p.s, point=True))
        elif isinstance(p, R5):
            m1, m2 = Monomial(p.s1 / p.s, 0), Monomial(p.s2 / p.s, 0)
            out.append(EdgeBand(j, m1, m2, p.s, p.s, True, True, point=True))
        else:
            raise ValidationError(f"edge chart piece {p.kind} is not radial about the skeleton")
    return out


def _disc_interval(rs: RadialSet) -> P.Interval:
    out = P.empty()
    for p in rs.pieces:
        if isinstance(p, R6) and p.a == 0 and p.s == ONE:
            out |= P.singleton(p.s1)
        elif isinstance(p, R7) and p.a == 0 and p.s == ONE:
            out |= P.open(p.s1, p.s2)
        else:
            raise ValidationError(f"disc chart piece {p.kind} is not radial")
    return out


def delta_inverse(F: Facade, D: Definable) -> CurveRadialSet:
    pieces: List[Piece] = []
    for i in range(len(F.vertices)):
        rho = P.empty()
        if i in D.vertices:
            rho |= P.singleton(ONE)
        for z in D.tubes:
            if z.vertex != i:
                continue
            if z.exceptions:
                raise ValidationError("cylinders with exceptions are not radial")
            rho |= _interval(z.lo, z.hi, z.lo_strict, z.hi_strict) & P.closedopen(ZERO, ONE)
        for (v, k), rs in D.discs.items():
            if v == i:
                inner = _disc_interval(rs)
                if inner != (rho & P.closedopen(ZERO, ONE)):
                    raise ValidationError(f"vertex {i}: disc and tube parts disagree")
        for iv in rho:
            pieces.append(VertexCyl(i, iv.lower, iv.upper, iv.left == P.OPEN, iv.right == P.OPEN))
    for j, rs in sorted(D.edges.items()):
        pieces.extend(_edge_bands(j, rs))
    return CurveRadialSet(tuple(pieces), F.tri.key())


def delta_roundtrip(F: Facade, A: CurveRadialSet):
    d = delta(F, A)
    return {"definable": d, "back": delta_inverse(F, d)}


# --------------------------------------------------------------------------
# boolean normalization
# --------------------------------------------------------------------------


def _eval_vertex(F: Facade, expr: CurveExpr, i: int) -> P.Interval:
    U = _vertex_universe(F, i)
    if isinstance(expr, CurveRadialSet):
        return _vertex_set(F, expr, i)
    parts = [_eval_vertex(F, a, i) for a in expr.args]
    if expr.op == "or":
        return parts[0] | parts[1]
    if expr.op == "and":
        return parts[0] & parts[1]
    if expr.op == "diff":
        return parts[0] - parts[1]
    if expr.op == "xor":
        return (parts[0] - parts[1]) | (parts[1] - parts[0])
    return U - parts[0]


def _eval_edge(F: Facade, expr: CurveExpr, j: int) -> Predicate:
    e = F.edges[j]
    if isinstance(expr, CurveRadialSet):
        return _edge_pred(F, expr, j)
    parts = [_eval_edge(F, a, j) for a in expr.args]
    if expr.op == "or":
        return RUnion(tuple(parts))
    if expr.op == "and":
        return Inter(tuple(parts))
    if expr.op == "diff":
        return Diff(parts[0], parts[1])
    if expr.op == "xor":
        return RUnion((Diff(parts[0], parts[1]), Diff(parts[1], parts[0])))
    return Diff(Annulus(e.r1, e.r2), parts[0])


def normalize_curve(F: Facade, expr: CurveExpr) -> CurveRadialSet:
    pieces: List[Piece] = []
    for i in range(len(F.vertices)):
        for iv in _eval_vertex(F, expr, i):
            pieces.append(VertexCyl(i, iv.lower, iv.upper, iv.left == P.OPEN, iv.right == P.OPEN))
    for j, e in enumerate(F.edges):
        pred = Inter((_eval_edge(F, expr, j), Annulus(e.r1, e.r2)))
        pieces.extend(_edge_bands(j, normalize(pred, F.cfg, merge=False)))
    return CurveRadialSet(tuple(pieces), F.tri.key())


def curve_is_empty(F: Facade, expr: CurveExpr) -> bool:
    for i in range(len(F.vertices)):
        if not _eval_vertex(F, expr, i).empty:
            return False
    for j, e in enumerate(F.edges):
        if not is_empty(Inter((_eval_edge(F, expr, j), Annulus(e.r1, e.r2))), F.cfg):
            return False
    return True


def curve_equal(F: Facade, A: CurveExpr, B: CurveExpr) -> bool:
    return curve_is_empty(F, A ^ B)


def definable_equal(F: Facade, D1: Definable, D2: Definable) -> bool:
    """Equality of definable data, compared chart by chart."""
    return curve_equal(F, delta_inverse(F, D1), delta_inverse(F, D2))


# --------------------------------------------------------------------------
# random sets
# --------------------------------------------------------------------------


def _rand_radius(rng: random.Random, lo: int = -24) -> Radius:
    if rng.random() < 0.1:
        return ZERO
    return Radius.exp(Fraction(rng.randint(lo, 0), 6))


def random_curve_set(F: Facade, rng: random.Random, max_pieces: int = 4) -> CurveRadialSet:
    pieces: List[Piece] = []
    for _ in range(rng.randint(0, max_pieces)):
        if F.edges and rng.random() < 0.5:
            j = rng.randrange(len(F.edges))
            e = F.edges[j]
            f1 = Monomial(_rand_radius(rng), Fraction(rng.randint(-6, 6), 3))
            f2 = Monomial(_rand_radius(rng, -12), Fraction(rng.randint(-6, 6), 3))
            lo_s, hi_s = rng.random() < 0.5, rng.random() < 0.5
            u = rng.random()
            mid = e.midpoint(F.cfg).r
            if u < 0.4:
                pieces.append(EdgeBand(j, f1, f2, e.r1, e.r2, lo_s, hi_s))
            elif u < 0.7:
                t = mid if mid.q.denominator == 1 else Radius.exp(int(mid.q))
                if not e.r1 < t < e.r2:
                    t = mid
                pieces.append(EdgeBand(j, f1, f2, t, t, lo_s, hi_s, point=True))
            else:
                pieces.append(EdgeBand(j, f1, f2, e.r1, mid, lo_s, hi_s))
        else:
            i = rng.randrange(len(F.vertices))
            a, b = sorted([_rand_radius(rng), _rand_radius(rng)])
            if rng.random() < 0.2:
                b = ONE
            pieces.append(VertexCyl(i, a, b, rng.random() < 0.5, rng.random() < 0.5))
    return CurveRadialSet(tuple(pieces), F.tri.key())
