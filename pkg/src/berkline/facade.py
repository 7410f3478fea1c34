"""Triangulations, skeleta, retractions and facades of subdomains of P^1."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .bline import DEFAULT_FIELD, INFINITY_POINT, BPoint, span_tree
from .maps import Mobius, RationalMap, fiber_count, pushforward
from .newton import IncompleteOracleError, Polynomial, envelope
from .valuation import (
    INF,
    ONE,
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

Point = Union[BPoint, type(INFINITY_POINT)]


class CompatibilityError(KernelError):
    """A pair of triangulations is not compatible with a map."""


def _is_inf(x) -> bool:
    return x is INFINITY_POINT


def point_from_json(obj, cfg: FieldConfig = DEFAULT_FIELD) -> Point:
    if obj == "inf":
        return INFINITY_POINT
    return BPoint.from_json(obj, cfg)


def point_to_json(x: Point):
    return x.to_json()


# --------------------------------------------------------------------------
# domains and triangulations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    """A closed disc D(a, s), the affine line A1 or the projective line P1."""

    kind: str
    a: Fraction = Fraction(0)
    s: Radius = ONE
    cfg: FieldConfig = DEFAULT_FIELD

    def __post_init__(self):
        if self.kind not in ("disc", "A1", "P1"):
            raise ValidationError(f"unknown domain kind {self.kind!r}")
        if self.kind == "disc" and not self.s.is_exp:
            raise ValidationError("a disc domain has radius in the value group")

    @staticmethod
    def disc(a=0, s: Radius = ONE, cfg: FieldConfig = DEFAULT_FIELD) -> "Domain":
        return Domain("disc", as_fraction(a), s, cfg)

    @property
    def boundary(self) -> Optional[BPoint]:
        return BPoint(self.a, self.s, self.cfg) if self.kind == "disc" else None

    def contains(self, y: Point) -> bool:
        if _is_inf(y):
            return self.kind == "P1"
        if self.kind == "disc":
            return y.le(self.boundary)
        return True

    def to_json(self):
        if self.kind == "disc":
            return {"disc": {"a": fmt_rational(self.a), "r": self.s.to_json()}}
        return self.kind

    @staticmethod
    def from_json(obj, cfg: FieldConfig = DEFAULT_FIELD) -> "Domain":
        if obj in ("A1", "P1"):
            return Domain(obj, cfg=cfg)
        try:
            d = obj["disc"]
            return Domain("disc", as_fraction(str(d["a"])), Radius.from_json(d["r"]), cfg)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad domain {obj!r}") from exc


@dataclass(frozen=True)
class Edge:
    """The open annulus between a lower vertex ``lo`` and ``hi`` (or the puncture)."""

    lo: int
    hi: Optional[int]
    c: Fraction
    r1: Radius
    r2: Radius

    @property
    def chart(self) -> Mobius:
        return Mobius(1, -self.c, 0, 1)

    def midpoint(self, cfg: FieldConfig) -> BPoint:
        return BPoint(self.c, between(self.r1, self.r2), cfg)

    def contains(self, y: BPoint) -> bool:
        return self.r1 < y.seminorm(self.c) < self.r2

    def to_json(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "center": fmt_rational(self.c),
            "annulus": [self.r1.to_json(), self.r2.to_json()],
            "chart": self.chart.to_json(),
        }


@dataclass
class Triangulation:
    domain: Domain
    points: Tuple[Point, ...]
    vertices: List[Point] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    parent: Dict[int, Optional[int]] = field(default_factory=dict)
    root: int = 0
    free_inf: bool = False

    @property
    def cfg(self) -> FieldConfig:
        return self.domain.cfg

    def index(self, x: Point) -> Optional[int]:
        for i, v in enumerate(self.vertices):
            if (_is_inf(v) and _is_inf(x)) or (not _is_inf(v) and not _is_inf(x) and v == x):
                return i
        return None

    def arity(self, i: int) -> int:
        return sum(1 for e in self.edges if e.lo == i or e.hi == i)

    def key(self):
        return tuple(v.to_json() if _is_inf(v) else (v.r, v.canon) for v in self.vertices)

    def to_json(self):
        return {"domain": self.domain.to_json(), "points": [point_to_json(v) for v in self.vertices]}

    @staticmethod
    def from_json(obj, cfg: FieldConfig = DEFAULT_FIELD) -> "Triangulation":
        try:
            dom = Domain.from_json(obj["domain"], cfg)
            pts = [point_from_json(p, cfg) for p in obj["points"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad triangulation {obj!r}") from exc
        return triangulate(dom, pts)

    # skeleton -------------------------------------------------------------
    def to_dot(self) -> str:
        lines = ["graph skeleton {"]
        for i, v in enumerate(self.vertices):
            label = "∞" if _is_inf(v) else v.label()
            lines.append(f'  v{i} [label="{label}"];')
        if any(e.hi is None for e in self.edges):
            lines.append('  puncture [label="∞", shape=point];')
        for e in self.edges:
            hi = "puncture" if e.hi is None else f"v{e.hi}"
            lines.append(f'  v{e.lo} -- {hi} [label="({_rlabel(e.r1)}, {_rlabel(e.r2)})"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def graph_json(self):
        return {
            "vertices": [point_to_json(v) for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
        }


def _rlabel(r: Radius) -> str:
    if r.is_zero:
        return "0"
    if r.is_inf:
        return "∞"
    return f"p^{fmt_rational(r.q)}"


def triangulate(
    dom: Domain,
    points: Sequence[Point],
    mode: str = "validate",
    extra: Sequence[Point] = (),
    keep: Optional[Sequence[Point]] = None,
) -> Triangulation:
    if mode == "refine":
        return _build_triangulation(dom, list(points) + list(extra))
    tri = _build_triangulation(dom, points)
    if mode == "validate":
        return tri
    if mode != "prune":
        raise ValueError(f"unknown mode {mode!r}")
    keep_tri = _build_triangulation(dom, keep) if keep is not None else None
    while True:
        removed = False
        cands = [i for i, v in enumerate(tri.vertices) if keep_tri is None or keep_tri.index(v) is None]
        for i in cands:
            if tri.arity(i) > 2:
                continue
            rest = [v for j, v in enumerate(tri.vertices) if j != i]
            try:
                tri = _build_triangulation(dom, rest)
            except KernelError:
                continue
            removed = True
            break
        if not removed:
            return tri


def _build_triangulation(dom: Domain, points: Sequence[Point]) -> Triangulation:
    cfg = dom.cfg
    finite: List[BPoint] = []
    has_inf = False
    for x in points:
        if _is_inf(x):
            if dom.kind != "P1":
                raise ValidationError("infinity is not a point of the domain")
            has_inf = True
            continue
        if not isinstance(x, BPoint):
            raise ValidationError(f"not a point: {x!r}")
        if x.cfg != cfg:
            x = BPoint(x.a, x.r, cfg)
        if not dom.contains(x):
            raise ValidationError(f"{x.label()} lies outside the domain")
        if x not in finite:
            finite.append(x)
    if not finite:
        raise ValidationError("S must meet the domain in a point of the affine chart")
    tree = span_tree(finite)
    S = set(finite)
    for n in tree.nodes:
        if n not in S:
            raise ValidationError(
                f"the component of X - S containing {n.label()} branches in three directions"
            )
    nodes = tree.nodes
    root = len(nodes) - 1
    if dom.kind == "disc" and not nodes[root] == dom.boundary:
        raise ValidationError(
            f"the component of X - S containing {dom.boundary.label()} is not a disc or annulus"
        )
    vertices: List[Point] = list(nodes)
    if has_inf:
        vertices.append(INFINITY_POINT)
    edges = []
    for i, pi in tree.edges():
        v, w = nodes[i], nodes[pi]
        r1 = v.r
        edges.append(Edge(i, pi, v.canon, r1, w.r))
    top = nodes[root]
    if dom.kind == "A1":
        edges.append(Edge(root, None, top.canon, top.r, INF))
    elif has_inf:
        edges.append(Edge(root, len(vertices) - 1, top.canon, top.r, INF))
    edges.sort(key=lambda e: (e.r1, e.c, e.r2))
    return Triangulation(
        dom,
        tuple(points),
        vertices,
        edges,
        dict(tree.parent),
        root,
        free_inf=dom.kind == "P1" and not has_inf,
    )


# --------------------------------------------------------------------------
# facades
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Encoded:
    """A point of the definable set attached to a facade."""

    kind: str
    index: int
    eta: Optional[BPoint] = None
    alpha: Optional[int] = None
    sub: int = 0

    def to_json(self):
        out = {"kind": self.kind, "index": self.index}
        if self.eta is not None:
            out["eta"] = self.eta.to_json()
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.kind == "disc":
            out["sub"] = self.sub
        return out

    @staticmethod
    def from_json(obj, cfg: FieldConfig = DEFAULT_FIELD) -> "Encoded":
        try:
            kind = obj["kind"]
            if kind not in ("vtx1", "vtx2", "edge", "tube", "disc"):
                raise ValidationError(f"unknown encoding kind {kind!r}")
            eta = BPoint.from_json(obj["eta"], cfg) if "eta" in obj else None
            return Encoded(kind, int(obj["index"]), eta, obj.get("alpha"), int(obj.get("sub", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad encoded point {obj!r}") from exc


@dataclass(frozen=True)
class TubeChart:
    vertex: int
    f: Mobius
    excluded: Tuple[int, ...]
    discs: Tuple[Mobius, ...] = ()

    def to_json(self):
        return {
            "vertex": self.vertex,
            "chart": self.f.to_json(),
            "excluded_residues": list(self.excluded),
            "retained_discs": [d.to_json() for d in self.discs],
        }


def _radius_exponent(x: BPoint) -> int:
    if not (x.r.is_exp and x.r.q.denominator == 1):
        raise ValidationError(f"type-2 vertex {x.label()} needs a radius p^n with n an integer")
    return int(x.r.q)


@dataclass
class Facade:
    tri: Triangulation
    tubes: Dict[int, TubeChart]

    @property
    def cfg(self) -> FieldConfig:
        return self.tri.cfg

    @property
    def vertices(self) -> List[Point]:
        return self.tri.vertices

    @property
    def edges(self) -> List[Edge]:
        return self.tri.edges

    @property
    def domain(self) -> Domain:
        return self.tri.domain

    def to_json(self):
        return {
            "triangulation": self.tri.to_json(),
            "edges": [e.to_json() for e in self.edges],
            "tubes": [self.tubes[i].to_json() for i in sorted(self.tubes)],
        }

    # location ---------------------------------------------------------------
    def locate(self, y: Point) -> Tuple[str, int]:
        """Which part of the facade contains y: vertex, edge, tube or disc."""
        if _is_inf(y):
            if not self.domain.contains(y):
                raise DomainError("infinity is outside the domain")
            i = self.tri.index(y)
            if i is not None:
                return "vertex", i
            return "disc", self.tri.root
        if not self.domain.contains(y):
            raise DomainError(f"{y.label()} lies outside the domain")
        i = self.tri.index(y)
        if i is not None:
            return "vertex", i
        for j, e in enumerate(self.edges):
            if e.contains(y):
                return "edge", j
        best = None
        for i, v in enumerate(self.vertices):
            if not _is_inf(v) and y.le(v) and (best is None or v.r < self.vertices[best].r):
                best = i
        if best is not None:
            return "tube", best
        if self.tri.free_inf:
            return "disc", self.tri.root
        raise DomainError(f"{y.label()} lies outside the domain")

    def tau(self, y: Point) -> Point:
        part, i = self.locate(y)
        if part == "vertex":
            return self.vertices[i]
        if part == "edge":
            e = self.edges[i]
            return BPoint(e.c, y.seminorm(e.c), self.cfg)
        return self.vertices[i]

    def on_skeleton(self, y: Point) -> bool:
        part, i = self.locate(y)
        if part == "vertex":
            return True
        if part == "edge":
            return y.r == y.seminorm(self.edges[i].c)
        return False

    def nu(self, t: Radius, y: Point) -> Point:
        if t.is_inf or ONE < t:
            raise DomainError("nu needs t in [0, 1]")
        part, i = self.locate(y)
        if part == "vertex":
            return y
        if part == "edge":
            e = self.edges[i]
            z = e.chart.push(y, self.cfg)
            d = self.cfg.abs(z.a)
            r = z.r if t * d <= z.r else t * d
            return e.chart.inverse().push(BPoint(z.a, r, self.cfg), self.cfg)
        f = self.tubes[i].f if part == "tube" else self.tubes[i].discs[0]
        z = f.push(y, self.cfg)
        r = z.r if t <= z.r else t
        return f.inverse().push(BPoint(z.a, r, self.cfg), self.cfg)

    # encoding -----------------------------------------------------------------
    def encode(self, y: Point) -> Encoded:
        part, i = self.locate(y)
        cfg = self.cfg
        if part == "vertex":
            v = self.vertices[i]
            return Encoded("vtx1" if _is_inf(v) or v.r.is_zero else "vtx2", i)
        if part == "edge":
            return Encoded("edge", i, self.edges[i].chart.push(y, cfg))
        if part == "tube":
            z = self.tubes[i].f.push(y, cfg)
            return Encoded("tube", i, z, cfg.residue(z.a))
        z = self.tubes[i].discs[0].push(y, cfg)
        return Encoded("disc", i, z, sub=0)

    def decode(self, e: Encoded) -> Point:
        cfg = self.cfg
        if e.kind in ("vtx1", "vtx2"):
            if not 0 <= e.index < len(self.vertices):
                raise ValidationError(f"no vertex {e.index}")
            y = self.vertices[e.index]
        elif e.kind == "edge":
            if not 0 <= e.index < len(self.edges):
                raise ValidationError(f"no edge {e.index}")
            ed = self.edges[e.index]
            if e.eta is None or not ed.r1 < e.eta.seminorm(0) < ed.r2:
                raise ValidationError("edge coordinate outside the standard annulus")
            y = ed.chart.inverse().push(e.eta, cfg)
        elif e.kind == "tube":
            tube = self.tubes.get(e.index)
            if tube is None or e.eta is None:
                raise ValidationError(f"no tube at vertex {e.index}")
            z = e.eta
            if not (z.seminorm(0) <= ONE and z.r < ONE):
                raise ValidationError("tube coordinate outside the open residue discs")
            if e.alpha is None or cfg.residue(z.a) != e.alpha:
                raise ValidationError("tube constraint violated: residue of eta differs from alpha")
            if e.alpha in tube.excluded:
                raise ValidationError(f"residue {e.alpha} is not in the tube")
            y = tube.f.inverse().push(z, cfg)
        else:
            tube = self.tubes.get(e.index)
            if tube is None or not 0 <= e.sub < len(tube.discs) or e.eta is None:
                raise ValidationError(f"no retained disc {e.sub} at vertex {e.index}")
            if not e.eta.seminorm(0) < ONE:
                raise ValidationError("disc coordinate outside the open unit disc")
            y = tube.discs[e.sub].inverse().push(e.eta, cfg)
        if self.encode(y) != e:
            raise ValidationError(f"{e.to_json()} is not a valid encoding")
        return y

    def vertex_chart_point(self, y: BPoint, i: int) -> BPoint:
        return self.tubes[i].f.push(y, self.cfg)


def build_facade(dom_or_tri, S: Optional[Sequence[Point]] = None, reduce: bool = False) -> Facade:
    """Facade with Möbius charts; ``reduce`` adds infinity to remove retained discs."""
    if isinstance(dom_or_tri, Triangulation):
        tri = dom_or_tri
    else:
        tri = triangulate(dom_or_tri, S)
    if reduce and tri.free_inf:
        tri = triangulate(tri.domain, list(tri.vertices) + [INFINITY_POINT])
    cfg = tri.cfg
    tubes: Dict[int, TubeChart] = {}
    for i, x in enumerate(tri.vertices):
        if _is_inf(x) or x.r.is_zero:
            continue
        n = _radius_exponent(x)
        scale = cfg.power(n)
        f = Mobius(scale, -x.canon * scale, 0, 1)
        excluded = set()
        for j, pj in tri.parent.items():
            if pj == i:
                excluded.add(cfg.residue(scale * (tri.vertices[j].a - x.canon)))
        discs: Tuple[Mobius, ...] = ()
        if tri.free_inf and i == tri.root:
            discs = (Mobius(0, 1, scale, -x.canon * scale),)
        tubes[i] = TubeChart(i, f, tuple(sorted(excluded)), discs)
    if tri.free_inf and tri.root not in tubes:
        raise ValidationError("the disc around infinity must hang off a type-2 vertex")
    return Facade(tri, tubes)


def skeleton_retract(F: Facade):
    return {"graph": F.tri, "tau": F.tau, "nu": F.nu}


# --------------------------------------------------------------------------
# transport along refinements and maps
# --------------------------------------------------------------------------


def _check_refines(F: Facade, G: Facade):
    if F.domain != G.domain:
        raise ValidationError("facades live on different domains")
    for v in F.vertices:
        if G.tri.index(v) is None:
            label = "∞" if _is_inf(v) else v.label()
            raise ValidationError(f"vertex {label} is missing from the refinement")


def transport_case(F: Facade, G: Facade, e: Encoded) -> str:
    """Which branch of the piecewise refinement map handles e."""
    _check_refines(F, G)
    if e.kind in ("vtx1", "vtx2"):
        return "identity"
    if e.kind == "edge":
        ed = F.edges[e.index]
        same = any(g.c == ed.c and g.r1 == ed.r1 and g.r2 == ed.r2 for g in G.edges)
        return "identity" if same else "edge"
    if e.kind == "tube":
        if _tube_class_unaffected(F, G, e.index, e.alpha):
            return "Y1"
        return "Y2"
    j = G.tri.index(F.vertices[e.index])
    return "identity" if j in G.tubes and G.tubes[j].discs else "recode"


def _tube_class_unaffected(F: Facade, G: Facade, i: int, alpha: int) -> bool:
    x = F.vertices[i]
    f = F.tubes[i].f
    cfg = F.cfg
    for v in G.vertices:
        if _is_inf(v) or F.tri.index(v) is not None:
            continue
        if v.le(x) and not v == x:
            z = f.push(v, cfg)
            if z.r < ONE and cfg.residue(z.a) == alpha:
                return False
    return True


def transport_id(F: Facade, G: Facade, e: Encoded) -> Encoded:
    """The refinement map between the definable sets of F and of a refinement G."""
    case = transport_case(F, G, e)
    cfg = F.cfg
    if e.kind in ("vtx1", "vtx2"):
        j = G.tri.index(F.vertices[e.index])
        return Encoded(e.kind, j)
    if case == "identity" and e.kind == "edge":
        ed = F.edges[e.index]
        j = next(k for k, g in enumerate(G.edges) if g.c == ed.c and g.r1 == ed.r1 and g.r2 == ed.r2)
        return Encoded("edge", j, e.eta)
    if case == "Y1":
        j = G.tri.index(F.vertices[e.index])
        return Encoded("tube", j, e.eta, e.alpha)
    if case == "identity":
        j = G.tri.index(F.vertices[e.index])
        return Encoded("disc", j, e.eta, sub=e.sub)
    # the affected chart: compose the new chart with the inverse of the old one
    if e.kind == "edge":
        old = F.edges[e.index].chart
    elif e.kind == "tube":
        old = F.tubes[e.index].f
    else:
        old = F.tubes[e.index].discs[e.sub]
    y = old.inverse().push(e.eta, cfg)
    part, j = G.locate(y)
    if part == "vertex":
        v = G.vertices[j]
        return Encoded("vtx1" if _is_inf(v) or v.r.is_zero else "vtx2", j)
    if part == "edge":
        sigma = G.edges[j].chart.compose(old.inverse())
        return Encoded("edge", j, sigma.push(e.eta, cfg))
    if part == "tube":
        sigma = G.tubes[j].f.compose(old.inverse())
        z = sigma.push(e.eta, cfg)
        return Encoded("tube", j, z, cfg.residue(z.a))
    sigma = G.tubes[j].discs[0].compose(old.inverse())
    return Encoded("disc", j, sigma.push(e.eta, cfg), sub=0)


def check_compatible(h: RationalMap, F1: Facade, F2: Facade) -> None:
    """h^{-1}(S2) = S1 and h^{-1}(E2) = E1, on the rational data available."""
    cfg = F1.cfg
    for v in F1.vertices:
        y = pushforward(h, v, cfg)
        if not F2.domain.contains(y) or F2.tri.index(y) is None:
            label = "∞" if _is_inf(v) else v.label()
            raise CompatibilityError(f"vertex {label} does not map to a vertex")
    for e in F1.edges:
        y = pushforward(h, e.midpoint(cfg), cfg)
        if not F2.domain.contains(y):
            raise CompatibilityError(f"edge at {fmt_rational(e.c)} leaves the target domain")
        part, _ = F2.locate(y)
        if part != "edge" or not F2.on_skeleton(y):
            raise CompatibilityError(f"edge at {fmt_rational(e.c)} does not map to an edge")
    for y in F2.vertices:
        if _is_inf(y):
            continue
        try:
            fib = fiber_count(h, y)
        except IncompleteOracleError as exc:
            raise CompatibilityError(f"fibre over {y.label()}: {exc}") from exc
        for x in fib["fiber"]:
            if F1.domain.contains(x) and F1.tri.index(x) is None:
                raise CompatibilityError(f"{x.label()} maps to the vertex {y.label()} but is not a vertex")


def map_transport(h: RationalMap, F1: Facade, F2: Facade, e: Encoded) -> Encoded:
    y = F1.decode(e)
    z = pushforward(h, y, F1.cfg)
    if not F2.domain.contains(z):
        raise DomainError("the image leaves the target domain")
    return F2.encode(z)


def _norm_runs(P: Polynomial, c: Fraction, lo: Radius, hi: Radius, cfg: FieldConfig):
    """|P|_{eta(c, t)} for lo < t < hi as (lo, hi, Monomial) runs."""
    q = P.recenter(c)
    monos = {i: Monomial(cfg.abs(x), Fraction(i)) for i, x in enumerate(q.coeffs) if x}
    return [(a, b, monos[i]) for a, b, i in envelope(monos, lo, hi)]


def _quotient_runs(A, B):
    cuts = sorted({r for a, b, _ in A for r in (a, b)} | {r for a, b, _ in B for r in (a, b)})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        ma = next(m for a, b, m in A if a <= lo and hi <= b)
        mb = next(m for a, b, m in B if a <= lo and hi <= b)
        m = Monomial(ma.rho / mb.rho, ma.g - mb.g)
        if out and out[-1][2] == m:
            out[-1] = (out[-1][0], hi, m)
        else:
            out.append((lo, hi, m))
    return out


def _reduce_mod_p(g: RationalMap, cfg: FieldConfig) -> Dict[str, List[int]]:
    cs = [c for c in g.num.coeffs + g.den.coeffs if c]
    best = min(cfg.vp(c) for c in cs)
    scale = cfg.power(-best)
    num = [cfg.residue(c * scale) for c in g.num.coeffs]
    den = [cfg.residue(c * scale) for c in g.den.coeffs]
    while num and num[-1] == 0:
        num.pop()
    while den and den[-1] == 0:
        den.pop()
    return {"num": num, "den": den}


def compile_map(h: RationalMap, F1: Facade, F2: Facade, check: bool = True):
    """Piecewise description: skeleton monomials per edge and residue maps per tube."""
    if check:
        check_compatible(h, F1, F2)
    cfg = F1.cfg
    edges = []
    for i, e in enumerate(F1.edges):
        _, j = F2.locate(pushforward(h, e.midpoint(cfg), cfg))
        c2 = F2.edges[j].c
        num = _norm_runs(h.num - h.den * c2, e.c, e.r1, e.r2, cfg)
        den = _norm_runs(h.den, e.c, e.r1, e.r2, cfg)
        for lo, hi, m in _quotient_runs(num, den):
            edges.append(
                {
                    "edge": i,
                    "image": j,
                    "interval": [lo.to_json(), hi.to_json()],
                    "monomial": m.to_json(),
                    "degree": abs(int(m.g)) if m.g.denominator == 1 else str(abs(m.g)),
                }
            )
    tubes = []
    for i, tube in sorted(F1.tubes.items()):
        y = pushforward(h, F1.vertices[i], cfg)
        j = F2.tri.index(y)
        if j is None or j not in F2.tubes:
            continue
        g = F2.tubes[j].f.as_map().compose(h.compose(tube.f.inverse().as_map()))
        tubes.append({"vertex": i, "image": j, "residue_map": _reduce_mod_p(g, cfg)})
    return {"edges": edges, "tubes": tubes}


def compiled_edge_value(compiled, i: int, t: Radius) -> Tuple[int, Radius]:
    for row in compiled["edges"]:
        if row["edge"] != i:
            continue
        lo, hi = Radius.from_json(row["interval"][0]), Radius.from_json(row["interval"][1])
        if lo < t < hi:
            return row["image"], Monomial.from_json(row["monomial"])(t)
    raise DomainError(f"t = {t} not covered by the compiled edge {i}")


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def sample_point(rng: random.Random, cfg: FieldConfig = DEFAULT_FIELD) -> BPoint:
    a = Fraction(rng.randint(-64, 64), cfg.p ** rng.randint(0, 4))
    if rng.random() < 0.15:
        return BPoint(a, ZERO, cfg)
    return BPoint(a, Radius.exp(Fraction(rng.randint(-36, 36), 6)), cfg)


def sample_disc_point(rng: random.Random, a0: Fraction, s: Radius, cfg: FieldConfig) -> BPoint:
    """A point of the closed disc D(a0, s), s = p^n with n an integer."""
    n = int(s.q)
    a = a0 + cfg.power(-n) * rng.randint(-64, 64) * cfg.power(rng.randint(0, 4))
    if rng.random() < 0.15:
        return BPoint(a, ZERO, cfg)
    return BPoint(a, Radius.exp(s.q - Fraction(rng.randint(0, 48), 6)), cfg)


def sample_points(F_or_dom, n: int, rng: random.Random) -> List[Point]:
    """n points of the domain, with vertices and infinity mixed in."""
    F = F_or_dom if isinstance(F_or_dom, Facade) else None
    dom = F.domain if F else F_or_dom
    out: List[Point] = []
    while len(out) < n:
        u = rng.random()
        if F is not None and u < 0.03:
            out.append(rng.choice(F.vertices))
        elif dom.kind == "P1" and u < 0.05:
            out.append(INFINITY_POINT)
        elif dom.kind == "disc":
            out.append(sample_disc_point(rng, dom.a, dom.s, dom.cfg))
        else:
            out.append(sample_point(rng, dom.cfg))
    return out
