"""Acceptance checks shared by the CLI ``verify`` command and the test suite.

Each check returns a ``CheckResult``; none of them raise on a failed property.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional

from .bline import INFINITY_POINT, BPoint, eta
from .bradial import (
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    Compl,
    Diff,
    Inter,
    Predicate,
    RadialSet,
    Term,
    Union,
    covers,
    normalize,
    pairwise_disjoint,
    set_equal,
)
from .curveradial import curve_equal, delta, delta_inverse, member, random_curve_set
from .facade import (
    Domain,
    build_facade,
    compile_map,
    compiled_edge_value,
    map_transport,
    sample_points,
    transport_case,
    transport_id,
)
from .maps import RationalMap, fiber_count, local_degree, multiplicity_locus, pushforward
from .newton import Polynomial, disc_image
from .valuation import INF, ONE, ZERO, FieldConfig, Monomial, Radius

E = Radius.exp
P2 = FieldConfig(2)


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    data: Dict[str, object] = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"criterion {self.number:2d} {status} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, fn: Callable[[], tuple], limit: Optional[float] = None) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail, data = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; runtime {dt:.2f}s exceeds {limit}s"
    return CheckResult(number, name, ok, detail, dt, data)


def fixtures() -> Dict[str, object]:
    """The three standard facades with S = {eta(0, 1)}."""
    x0 = eta(0, ONE)
    return {
        "disc": build_facade(Domain.disc(0, ONE), [x0]),
        "A1": build_facade(Domain("A1"), [x0]),
        "P1": build_facade(Domain("P1"), [x0]),
    }


# --------------------------------------------------------------------------
# 1. the complement of an annulus cylinder graph
# --------------------------------------------------------------------------

ANNULUS_GRAPH = R2(Fraction(0), ONE, INF, E(-1), Fraction(1))


def _kinds(rs: RadialSet) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for p in rs:
        k = type(p).__name__
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def check_annulus_complement() -> CheckResult:
    def run():
        comp = normalize(Compl(ANNULUS_GRAPH), P2)
        pieces = list(comp)
        disjoint = pairwise_disjoint(pieces + [ANNULUS_GRAPH], P2)
        cover = covers(pieces + [ANNULUS_GRAPH], P2)
        n = len(pieces)
        detail = (
            f"{n} pieces {_kinds(comp)}; disjoint={disjoint} cover={cover}; "
            "required exactly 10"
        )
        return n == 10 and disjoint and cover, detail, {"pieces": n, "disjoint": disjoint, "cover": cover}

    return _timed(1, "complement normal form", run, 1.0)


# --------------------------------------------------------------------------
# 2. boolean algebra fuzz
# --------------------------------------------------------------------------


def _center(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-16, 16), 2 ** rng.randint(0, 3))


def _radius(rng: random.Random) -> Radius:
    return E(Fraction(rng.randint(-36, 36), 6))


def _radius0(rng: random.Random) -> Radius:
    return ZERO if rng.random() < 0.2 else _radius(rng)


def _slope(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-12, 12), 6)


def _pair(rng: random.Random):
    return tuple(sorted([_radius0(rng), _radius(rng)]))


def random_piece(rng: random.Random, p: int = 2):
    k = rng.randint(0, 7)
    a = _center(rng)
    if k == 0:
        return R0(a, _radius0(rng))
    if k in (1, 2, 3):
        s1, s2 = _pair(rng)
        if rng.random() < 0.3:
            s2 = INF
        if k == 1:
            return R1(a, s1, s2)
        if k == 2:
            return R2(a, s1, s2, _radius0(rng), _slope(rng))
        return R3(a, s1, s2, _radius0(rng), _slope(rng), _radius(rng), _slope(rng))
    if k in (4, 5):
        s = _radius(rng)
        holes = ()
        if s.q.denominator == 1 and rng.random() < 0.6:
            holes = (a + Fraction(p) ** int(-s.q),)
        s1, s2 = _pair(rng)
        if k == 4:
            return R4(a, s, holes, s1)
        return R5(a, s, holes, s1, s2)
    s = _radius(rng) if rng.random() < 0.8 else INF
    s1, s2 = _pair(rng)
    if k == 6:
        return R6(a, s, s1)
    return R7(a, s, s1, s2)


def random_expr(rng: random.Random, leaves: List[Predicate]) -> Predicate:
    if len(leaves) == 1:
        return Compl(leaves[0]) if rng.random() < 0.3 else leaves[0]
    i = rng.randint(1, len(leaves) - 1)
    left, right = random_expr(rng, leaves[:i]), random_expr(rng, leaves[i:])
    op = rng.choice("uid")
    e = Union((left, right)) if op == "u" else Inter((left, right)) if op == "i" else Diff(left, right)
    return Compl(e) if rng.random() < 0.2 else e


def random_bpoint(rng: random.Random, cfg: FieldConfig = P2) -> BPoint:
    a = Fraction(rng.randint(-64, 64), 2 ** rng.randint(0, 5))
    r = ZERO if rng.random() < 0.1 else E(Fraction(rng.randint(-48, 48), 6))
    return BPoint(a, r, cfg)


def check_fuzz(seed: int = 0, n_expr: int = 500, n_pts: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad = []
        for it in range(n_expr):
            leaves = [random_piece(rng) for _ in range(rng.randint(1, 4))]
            e = random_expr(rng, leaves)
            N = normalize(e, P2)
            for _ in range(n_pts):
                x = random_bpoint(rng)
                if e.member(x) != N.member(x):
                    bad.append(f"membership #{it} at {x.label()}")
                    break
            if not pairwise_disjoint(list(N), P2):
                bad.append(f"overlap #{it}")
        return not bad, f"{n_expr} expressions x {n_pts} points, {len(bad)} failures {bad[:3]}", {"failures": bad}

    return _timed(2, "boolean algebra fuzz", run, 60.0)


# --------------------------------------------------------------------------
# 3. disc images against binomial recentering
# --------------------------------------------------------------------------


def _coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-32, 32), rng.randint(1, 32))


def binomial_recenter(coeffs: List[Fraction], a: Fraction) -> List[Fraction]:
    """c_i = sum_k a_k C(k, i) a^(k - i); independent of synthetic division."""
    n = len(coeffs)
    return [sum((coeffs[k] * comb(k, i) * a ** (k - i) for k in range(i, n)), Fraction(0)) for i in range(n)]


def sample_in_disc(rng: random.Random, a: Fraction, r: Radius, cfg: FieldConfig) -> Fraction:
    if r.is_zero:
        return a
    # |p^n| = p^-n <= r needs n >= -q, i.e. n = ceil(-q)
    n = -(r.q.numerator // r.q.denominator)
    w = rng.choice([w for w in range(1, 40) if w % cfg.p])
    u = Fraction(rng.randint(-50, 50), w) * cfg.power(n + rng.randint(0, 3))
    return a + u


def check_disc_images(seed: int = 0, n_poly: int = 100, n_pts: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        cfg = P2
        bad = []
        for it in range(n_poly):
            deg = rng.randint(1, 5)
            cs = [_coeff(rng) for _ in range(deg)] + [Fraction(rng.choice([-1, 1]) * rng.randint(1, 32), rng.randint(1, 32))]
            h = Polynomial(tuple(cs))
            a = _center(rng)
            r = ZERO if rng.random() < 0.05 else _radius(rng)
            img = disc_image(h, a, r, cfg)
            c = binomial_recenter(list(h.coeffs), a)
            s = ZERO
            for i in range(1, len(c)):
                v = cfg.abs(c[i]) * (r**i if not r.is_zero else ZERO)
                if s < v:
                    s = v
            if img.r != s or cfg.abs(img.a - c[0]) > s:
                bad.append(f"radius #{it}: got {img.label()}, oracle ({c[0]}, {s})")
                continue
            for _ in range(n_pts):
                x = sample_in_disc(rng, a, r, cfg)
                if cfg.abs(x - a) > r or cfg.abs(h(x) - img.a) > s:
                    bad.append(f"sample #{it} x={x}")
                    break
        return not bad, f"{n_poly} polynomials, {len(bad)} failures {bad[:3]}", {"failures": bad}

    return _timed(3, "disc image oracle", run, 30.0)


# --------------------------------------------------------------------------
# 4. multiplicity loci
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusThreshold(Predicate):
    """{eta(a, r) : r >= c * |a|} for c <= 1, written as r >= c * D(0)."""

    c: Radius

    def centers(self):
        return (Fraction(0),)

    def terms(self):
        return (Term(self.c, ((Fraction(0), Fraction(1)),)),)

    def holds(self, D, r):
        return self.c * D(Fraction(0)) <= r


def locus_grid(cfg: FieldConfig = P2) -> List[BPoint]:
    """33 centres m/8 and 25 radii p^q, q from -6 to 6 in steps of 1/2."""
    return [BPoint(Fraction(m, 8), E(Fraction(k, 2)), cfg) for m in range(-16, 17) for k in range(-12, 13)]


def check_loci() -> CheckResult:
    def run():
        notes, ok = [], True
        grid = locus_grid()
        for name, h, d, c in (
            ("T^2", RationalMap.polynomial(0, 0, 1), 2, E(-1)),
            ("T^3", RationalMap.polynomial(0, 0, 0, 1), 3, ONE),
        ):
            rep = multiplicity_locus(h, d, cfg=P2)
            if rep.locus is None:
                ok = False
                notes.append(f"{name}: residual mode")
                continue
            sym = set_equal(rep.locus, RadiusThreshold(c), P2)
            bad = sum(1 for x in grid if (local_degree(h, x) == d) != rep.locus.member(x))
            bad += sum(1 for x in grid if rep.locus.member(x) != RadiusThreshold(c).member(x))
            ok = ok and sym and bad == 0
            notes.append(f"{name} d={d}: symbolic={sym}, grid mismatches={bad}/{len(grid)}")
        return ok, "; ".join(notes), {}

    return _timed(4, "multiplicity loci", run, 10.0)


# --------------------------------------------------------------------------
# 5. degree sums over fibres
# --------------------------------------------------------------------------


def _omega_gap(p: int) -> Radius:
    # |w - 1| for a primitive cube root of unity w: p^-1/2 when p = 3, else 1
    return E(Fraction(-1, 2)) if p == 3 else ONE


def fiber_fixture(h: RationalMap, name: str, rng: random.Random, cfg: FieldConfig):
    """A source point whose image has a fibre with rational root data."""
    while True:
        alpha = Fraction(rng.randint(-16, 16), rng.choice([1, 1, 2, 3, 4, 5]))
        r = ZERO if rng.random() < 0.2 else E(Fraction(rng.randint(-24, 12), 4))
        if name == "T^3" and alpha != 0:
            # the two other preimage centres are alpha * w, alpha * w^2
            if r.is_zero or r < cfg.abs(alpha) * _omega_gap(cfg.p):
                continue
        return BPoint(alpha, r, cfg)


def check_degree_sums(seed: int = 0, n_fibers: int = 50) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad, total = [], 0
        maps = {
            "T^2": RationalMap.polynomial(0, 0, 1),
            "T^2-1": RationalMap.polynomial(-1, 0, 1),
            "T^3": RationalMap.polynomial(0, 0, 0, 1),
        }
        for p in (2, 3):
            cfg = FieldConfig(p)
            for name, h in maps.items():
                for _ in range(n_fibers):
                    x = fiber_fixture(h, name, rng, cfg)
                    y = pushforward(h, x)
                    res = fiber_count(h, y, check=False)
                    total += 1
                    if sum(res["degrees"]) != h.degree:
                        bad.append(f"p={p} {name} y={y.label()} degrees={res['degrees']}")
        return not bad, f"{total} fibres, {len(bad)} failures {bad[:3]}", {"failures": bad}

    return _timed(5, "degree sums", run)


# --------------------------------------------------------------------------
# 6-10. facades
# --------------------------------------------------------------------------


def check_round_trips(seed: int = 0, n: int = 1000) -> CheckResult:
    def run():
        rng = random.Random(seed)
        notes, ok = [], True
        for name, F in fixtures().items():
            bad = 0
            for y in sample_points(F, n, rng):
                e = F.encode(y)
                if e.kind == "tube" and F.cfg.residue(e.eta.a) != e.alpha:
                    bad += 1
                z = F.decode(e)
                if not (z is y or z == y):
                    bad += 1
            ok = ok and bad == 0
            notes.append(f"{name}: {bad} failures")
        return ok, f"{n} samples each; " + ", ".join(notes), {}

    return _timed(6, "facade round trips", run)


def check_refinement(seed: int = 0, n: int = 1000) -> CheckResult:
    def run():
        rng = random.Random(seed)
        x0 = eta(0, ONE)
        F = build_facade(Domain.disc(0, ONE), [x0])
        G = build_facade(Domain.disc(0, ONE), [x0, eta(0, E(-1))])
        bad, cases = 0, {}
        for y in sample_points(F, n, rng):
            e = F.encode(y)
            case = transport_case(F, G, e)
            cases[case] = cases.get(case, 0) + 1
            t = transport_id(F, G, e)
            if t != G.encode(y):
                bad += 1
            # points away from the new vertex keep their coordinates
            if case in ("identity", "Y1") and (t.eta, t.alpha) != (e.eta, e.alpha):
                bad += 1
        return bad == 0, f"{n} samples, {bad} failures, cases {dict(sorted(cases.items()))}", {"cases": cases}

    return _timed(7, "refinement transport", run)


def check_morphism(seed: int = 0, n: int = 1000) -> CheckResult:
    def run():
        rng = random.Random(seed)
        h = RationalMap.polynomial(0, 0, 1)
        F = fixtures()["disc"]
        bad = 0
        for y in sample_points(F, n, rng):
            if map_transport(h, F, F, F.encode(y)) != F.encode(pushforward(h, y)):
                bad += 1
        Fa = fixtures()["A1"]
        comp = compile_map(h, Fa, Fa)
        runs = comp["edges"][0]["interval"] if comp["edges"] else None
        edges = comp["edges"]
        shape = False
        if len(edges) == 1:
            m = Monomial.from_json(edges[0]["monomial"])
            shape = m.rho == ONE and m.g == 2 and edges[0]["degree"] == 2
        pts_bad = 0
        for k in range(1, 11):
            t = E(Fraction(k, 3))
            j, val = compiled_edge_value(comp, 0, t)
            y = BPoint(Fraction(0), t, Fa.cfg)
            img = map_transport(h, Fa, Fa, Fa.encode(y))
            if img.kind != "edge" or img.index != j or img.eta.r != val or val != t * t:
                pts_bad += 1
        ok = bad == 0 and shape and pts_bad == 0
        detail = f"{n} samples, {bad} failures; compiled t -> t^2: {shape}; radius mismatches {pts_bad}/10"
        return ok, detail, {"interval": runs}

    return _timed(8, "morphism square", run)


def check_delta(seed: int = 0, n_sets: int = 100, n_pts: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        notes, ok = [], True
        for name, F in fixtures().items():
            pts = sample_points(F, n_pts, rng)
            encs = [F.encode(y) for y in pts]
            bad = 0
            for _ in range(n_sets):
                A = random_curve_set(F, rng)
                D = delta(F, A)
                if not curve_equal(F, A, delta_inverse(F, D)):
                    bad += 1
                if any(member(F, y, A) != D.member(e) for y, e in zip(pts, encs)):
                    bad += 1
            ok = ok and bad == 0
            notes.append(f"{name}: {bad} failures")
        return ok, f"{n_sets} sets x {n_pts} samples; " + ", ".join(notes), {}

    return _timed(9, "radial set bijection", run)


def check_retraction(seed: int = 0, n: int = 1000) -> CheckResult:
    def run():
        rng = random.Random(seed)
        notes, ok = [], True
        for name, F in fixtures().items():
            bad = 0
            for y in sample_points(F, n, rng):
                t = F.tau(y)
                if not F.on_skeleton(t) or F.tau(t) != t:
                    bad += 1
                if F.on_skeleton(y) and t != y:
                    bad += 1
                n0, n1 = F.nu(ZERO, y), F.nu(ONE, y)
                if not (n0 is y or n0 == y) or not F.on_skeleton(n1):
                    bad += 1
            ok = ok and bad == 0
            notes.append(f"{name}: {bad} failures")
        return ok, f"{n} samples each; " + ", ".join(notes), {}

    return _timed(10, "retraction laws", run)


CHECKS: Dict[int, Callable[..., CheckResult]] = {
    1: check_annulus_complement,
    2: check_fuzz,
    3: check_disc_images,
    4: check_loci,
    5: check_degree_sums,
    6: check_round_trips,
    7: check_refinement,
    8: check_morphism,
    9: check_delta,
    10: check_retraction,
}

_SEEDED = {2, 3, 5, 6, 7, 8, 9, 10}


def run_check(number: int, seed: int = 0) -> CheckResult:
    fn = CHECKS[number]
    return fn(seed=seed) if number in _SEEDED else fn()


def run_all(seed: int = 0, numbers=None) -> List[CheckResult]:
    return [run_check(k, seed) for k in (numbers or sorted(CHECKS))]


__all__ = ["CheckResult", "CHECKS", "run_check", "run_all", "fixtures", "INFINITY_POINT"]
