"""Radial subsets of the space B of closed discs.

Membership of a point eta(e, r) in every set handled here depends only on
``r`` and on the seminorm profile ``D(a) = max(|e - a|, r)`` for finitely many
centres ``a``.  A set is described by a :class:`Predicate`: its centres, the
radii its distances are compared with, the monomial terms compared with ``r``,
and an exact evaluator.  :func:`decompose` cuts B into cells on which every
such comparison is constant; normalization keeps the member cells and merges
neighbours back into basic pieces R0-R7.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .bline import DEFAULT_FIELD, BPoint, join_closure
from .valuation import (
    INF,
    ONE,
    ZERO,
    FieldConfig,
    Monomial,
    Radius,
    ValidationError,
    as_fraction,
    between,
    fmt_rational,
)

Profile = Callable[[Fraction], Radius]

T_MONO = Monomial(ONE, Fraction(1))
ZERO_MONO = Monomial(ZERO, Fraction(0))


def const(r: Radius) -> Monomial:
    return Monomial(r, Fraction(0))


def mono_limit(f: Monomial, t: Radius) -> Radius:
    """Value of f at t, extended by continuity to Zero and Infinity."""
    if f.rho.is_zero:
        return ZERO
    if f.g == 0:
        return f.rho
    if t.is_exp:
        return f(t)
    if t.is_zero:
        return ZERO if f.g > 0 else INF
    return INF if f.g > 0 else ZERO


# --------------------------------------------------------------------------
# terms and predicates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """rho * prod_c D(c)^e, a monomial in the seminorm profile."""

    rho: Radius
    exps: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def eval(self, D: Profile) -> Radius:
        if self.rho.is_zero:
            return ZERO
        out = self.rho
        for c, e in self.exps:
            out = out * (D(c) ** e)
        return out

    def on_segment(self, cstar: Fraction, u1: Radius, dist) -> Monomial:
        if self.rho.is_zero:
            return ZERO_MONO
        rho, g = self.rho, Fraction(0)
        for c, e in self.exps:
            d = dist(cstar, c)
            if d <= u1:
                g += e
            else:
                rho = rho * d ** e
        return Monomial(rho, g)


def dterm(a, rho: Radius = ONE, g=1) -> Term:
    return Term(rho, ((as_fraction(a), as_fraction(g)),))


def cterm(r: Radius) -> Term:
    return Term(r, ())


class Predicate:
    """A subset of B given by comparisons of r with monomials of the profile."""

    def centers(self) -> Iterable[Fraction]:
        return ()

    def thresholds(self) -> Iterable[Radius]:
        return ()

    def terms(self) -> Iterable[Term]:
        return ()

    def holds(self, D: Profile, r: Radius) -> bool:
        raise NotImplementedError

    def member(self, x: BPoint) -> bool:
        return self.holds(x.seminorm, x.r)

    def __contains__(self, x: BPoint) -> bool:
        return self.member(x)

    # boolean sugar
    def __or__(self, other):
        return Union((self, other))

    def __and__(self, other):
        return Inter((self, other))

    def __sub__(self, other):
        return Diff(self, other)

    def __invert__(self):
        return Compl(self)


@dataclass(frozen=True)
class _Nary(Predicate):
    args: Tuple[Predicate, ...]

    def centers(self):
        for a in self.args:
            yield from a.centers()

    def thresholds(self):
        for a in self.args:
            yield from a.thresholds()

    def terms(self):
        for a in self.args:
            yield from a.terms()


@dataclass(frozen=True)
class Union(_Nary):
    def holds(self, D, r):
        return any(a.holds(D, r) for a in self.args)


@dataclass(frozen=True)
class Inter(_Nary):
    def holds(self, D, r):
        return all(a.holds(D, r) for a in self.args)


@dataclass(frozen=True)
class Xor(_Nary):
    def holds(self, D, r):
        return sum(1 for a in self.args if a.holds(D, r)) % 2 == 1


class Diff(_Nary):
    def __init__(self, a: Predicate, b: Predicate):
        object.__setattr__(self, "args", (a, b))

    def holds(self, D, r):
        return self.args[0].holds(D, r) and not self.args[1].holds(D, r)


class Compl(_Nary):
    def __init__(self, a: Predicate):
        object.__setattr__(self, "args", (a,))

    def holds(self, D, r):
        return not self.args[0].holds(D, r)


class Everything(Predicate):
    def holds(self, D, r):
        return True


# --------------------------------------------------------------------------
# basic pieces
# --------------------------------------------------------------------------


def _meets_open(D: Profile, r: Radius, b: Fraction, s: Radius) -> bool:
    """D(x, r) meets the open disc D^-(b, s)."""
    db = D(b)
    if r < s:
        return db < s
    return db <= r


@dataclass(frozen=True)
class Basic(Predicate):
    kind = "?"

    def to_json(self):
        out = {"kind": self.kind}
        for k, v in self.__dict__.items():
            if isinstance(v, Radius):
                out[k] = v.to_json()
            elif isinstance(v, tuple):
                out[k] = [fmt_rational(b) for b in v]
            else:
                out[k] = fmt_rational(v)
        return out

    def lower(self) -> Radius:
        return getattr(self, "s1", getattr(self, "s", ZERO))


@dataclass(frozen=True)
class R0(Basic):
    a: Fraction
    s: Radius
    kind = "R0"

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s,)

    def terms(self):
        return (cterm(self.s), dterm(self.a))

    def holds(self, D, r):
        return r == self.s and D(self.a) <= self.s


@dataclass(frozen=True)
class R1(Basic):
    a: Fraction
    s1: Radius
    s2: Radius
    kind = "R1"

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s1, self.s2)

    def terms(self):
        return (cterm(self.s1), cterm(self.s2), dterm(self.a))

    def holds(self, D, r):
        return self.s1 < r < self.s2 and D(self.a) <= r


@dataclass(frozen=True)
class R2(Basic):
    a: Fraction
    s1: Radius
    s2: Radius
    rho1: Radius
    g1: Fraction
    kind = "R2"

    @property
    def m1(self) -> Monomial:
        return Monomial(self.rho1, self.g1)

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s1, self.s2)

    def terms(self):
        return (dterm(self.a), dterm(self.a, self.rho1, self.g1))

    def holds(self, D, r):
        d = D(self.a)
        return r < d and self.s1 < d < self.s2 and self.m1(d) == r


@dataclass(frozen=True)
class R3(Basic):
    a: Fraction
    s1: Radius
    s2: Radius
    rho1: Radius
    g1: Fraction
    rho2: Radius
    g2: Fraction
    kind = "R3"

    @property
    def m1(self) -> Monomial:
        return Monomial(self.rho1, self.g1)

    @property
    def m2(self) -> Monomial:
        return Monomial(self.rho2, self.g2)

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s1, self.s2)

    def terms(self):
        return (
            dterm(self.a),
            dterm(self.a, self.rho1, self.g1),
            dterm(self.a, self.rho2, self.g2),
        )

    def holds(self, D, r):
        d = D(self.a)
        if not (r < d and self.s1 < d < self.s2):
            return False
        hi = self.m2(d)
        return self.m1(d) < r < hi and hi <= d


@dataclass(frozen=True)
class _ClosedCyl(Basic):
    def _in_tube(self, D, r) -> bool:
        if not (D(self.a) <= self.s and r <= self.s):
            return False
        return not any(_meets_open(D, r, b, self.s) for b in self.holes)

    def centers(self):
        return (self.a,) + tuple(self.holes)

    def terms(self):
        out = [cterm(self.s), dterm(self.a)]
        out.extend(dterm(b) for b in self.holes)
        return out


@dataclass(frozen=True)
class R4(_ClosedCyl):
    a: Fraction
    s: Radius
    holes: Tuple[Fraction, ...]
    s1: Radius
    kind = "R4"

    def thresholds(self):
        return (self.s, self.s1)

    def terms(self):
        return list(super().terms()) + [cterm(self.s1)]

    def holds(self, D, r):
        return r == self.s1 and self._in_tube(D, r)


@dataclass(frozen=True)
class R5(_ClosedCyl):
    a: Fraction
    s: Radius
    holes: Tuple[Fraction, ...]
    s1: Radius
    s2: Radius
    kind = "R5"

    def thresholds(self):
        return (self.s, self.s1, self.s2)

    def terms(self):
        return list(super().terms()) + [cterm(self.s1), cterm(self.s2)]

    def holds(self, D, r):
        return self.s1 < r < self.s2 and self.s2 <= self.s and self._in_tube(D, r)


@dataclass(frozen=True)
class R6(Basic):
    a: Fraction
    s: Radius
    s1: Radius
    kind = "R6"

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s, self.s1)

    def terms(self):
        return (cterm(self.s), cterm(self.s1), dterm(self.a))

    def holds(self, D, r):
        return r == self.s1 and D(self.a) < self.s


@dataclass(frozen=True)
class R7(Basic):
    a: Fraction
    s: Radius
    s1: Radius
    s2: Radius
    kind = "R7"

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s, self.s1, self.s2)

    def terms(self):
        return (cterm(self.s), cterm(self.s1), cterm(self.s2), dterm(self.a))

    def holds(self, D, r):
        return self.s1 < r < self.s2 and self.s2 <= self.s and D(self.a) < self.s


BASIC_KINDS = {c.kind: c for c in (R0, R1, R2, R3, R4, R5, R6, R7)}
_FIELD_TYPES = {
    "a": "q", "s": "r", "s1": "r", "s2": "r", "rho1": "r", "rho2": "r",
    "g1": "q", "g2": "q", "holes": "ql",
}


def basic_from_json(obj) -> Basic:
    try:
        cls = BASIC_KINDS[obj["kind"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"unknown basic piece {obj!r}") from exc
    kwargs = {}
    for name in cls.__dataclass_fields__:
        if name not in obj:
            if name == "holes":
                kwargs[name] = ()
                continue
            raise ValidationError(f"{obj['kind']}: missing field {name!r}")
        typ = _FIELD_TYPES[name]
        v = obj[name]
        try:
            if typ == "q":
                kwargs[name] = as_fraction(str(v))
            elif typ == "r":
                kwargs[name] = Radius.from_json(v)
            else:
                kwargs[name] = tuple(as_fraction(str(b)) for b in v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{obj['kind']}.{name}: {exc}") from exc
    return cls(**kwargs)


@dataclass(frozen=True)
class RadialSet(Predicate):
    """A finite disjoint union of basic pieces."""

    pieces: Tuple[Basic, ...] = ()

    def centers(self):
        for p in self.pieces:
            yield from p.centers()

    def thresholds(self):
        for p in self.pieces:
            yield from p.thresholds()

    def terms(self):
        for p in self.pieces:
            yield from p.terms()

    def holds(self, D, r):
        return any(p.holds(D, r) for p in self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def kinds(self) -> List[str]:
        return [p.kind for p in self.pieces]

    def to_json(self):
        return {"pieces": [p.to_json() for p in self.pieces]}

    @staticmethod
    def from_json(obj) -> "RadialSet":
        if isinstance(obj, dict):
            obj = obj.get("pieces", [])
        return RadialSet(tuple(basic_from_json(p) for p in obj))


# --------------------------------------------------------------------------
# cell decomposition
# --------------------------------------------------------------------------


@dataclass
class Cell:
    """A region of B on which every comparison of a predicate is constant.

    ``loc`` is ``(c, lo, hi)``: an on-hull point when ``lo == hi`` or an open
    hull segment otherwise.  ``col`` identifies the column of off-hull cells
    attached at the location; ``bounds`` are the r-bounds (monomials in the
    hull coordinate t).
    """

    kind: str
    c: Fraction
    lo: Radius
    hi: Radius
    f_lo: Optional[Monomial]
    f_hi: Optional[Monomial]
    t_rep: Radius
    r_rep: Radius
    member: bool = False

    def r_range(self) -> Tuple[Radius, Radius, bool]:
        """(lo, hi, is_point) of the radii r occurring in the cell."""
        k = self.kind
        if k == "leaf":
            return ZERO, ZERO, True
        if k == "hpt":
            return self.lo, self.lo, True
        if k == "hseg":
            return self.lo, self.hi, False
        if k == "alevel":
            v = self.f_lo.rho if not self.f_lo.rho.is_zero else ZERO
            return v, v, True
        if k == "aband":
            return self.f_lo(self.lo), self.f_hi(self.lo), False
        if k == "graph":
            f = self.f_lo
            if f.rho.is_zero or f.g == 0:
                v = mono_limit(f, self.lo)
                return v, v, True
            a, b = mono_limit(f, self.lo), mono_limit(f, self.hi)
            return min(a, b), max(a, b), False
        if k == "band":
            lo = min(mono_limit(self.f_lo, self.lo), mono_limit(self.f_lo, self.hi))
            hi = max(mono_limit(self.f_hi, self.lo), mono_limit(self.f_hi, self.hi))
            return lo, hi, False
        raise AssertionError(k)


class Decomposition:
    """Cells of B adapted to a predicate (and evaluated against it)."""

    def __init__(self, pred: Predicate, cfg: FieldConfig = DEFAULT_FIELD, extra_centers=()):
        self.cfg = cfg
        self.pred = pred
        cs = {as_fraction(c) for c in pred.centers()} | {as_fraction(c) for c in extra_centers}
        if not cs:
            cs = {Fraction(0)}
        self.C = sorted(cs)
        self._dcache: Dict[Tuple[Fraction, Fraction], Radius] = {}
        self._pcache: Dict[Tuple[Fraction, Radius], Profile] = {}
        terms = {t for t in pred.terms() if not t.rho.is_inf}
        self.terms = sorted(terms, key=lambda t: (t.rho, t.exps))
        T = {t for t in pred.thresholds() if t.is_exp}
        for a, b in itertools.combinations(self.C, 2):
            T.add(self.dist(a, b))
        self.T = sorted(T)
        self.cells: List[Cell] = []
        self.columns: Dict[Tuple, List[Cell]] = {}
        self.hull: Dict[Tuple, Cell] = {}
        self._build()

    # distances ----------------------------------------------------------
    def dist(self, a: Fraction, b: Fraction) -> Radius:
        key = (a.numerator, a.denominator, b.numerator, b.denominator)
        d = self._dcache.get(key)
        if d is None:
            d = self.cfg.abs(a - b)
            self._dcache[key] = d
        return d

    def canon(self, c: Fraction, u: Radius) -> Fraction:
        for a in self.C:
            if self.dist(a, c) <= u:
                return a
        return c

    def profile(self, c: Fraction, t: Radius) -> Profile:
        """D(a) = max(t, |c - a|) for the centres of the predicate."""
        key = (c, t)
        D = self._pcache.get(key)
        if D is None:
            D = self._pcache[key] = self._profile(c, t)
        return D

    def _profile(self, c: Fraction, t: Radius) -> Profile:
        table = {}
        for a in self.C:
            d = self.dist(c, a)
            table[(a.numerator, a.denominator)] = t if d <= t else d
        dist = self.dist

        def D(a):
            v = table.get((a.numerator, a.denominator))
            if v is None:
                d = dist(c, as_fraction(a))
                v = t if d <= t else d
            return v

        return D

    def holds_at(self, c, t, r) -> bool:
        return self.pred.holds(self.profile(c, t), r)

    # construction --------------------------------------------------------
    def _build(self):
        radii = [ZERO] + self.T
        seen_pts = set()
        seen_segs = set()
        segs = []
        for c in self.C:
            for u in radii:
                key = (self.canon(c, u), u)
                if key not in seen_pts:
                    seen_pts.add(key)
            for u1, u2 in zip(radii, radii[1:] + [INF]):
                key = (self.canon(c, u1), u1, u2)
                if key not in seen_segs:
                    seen_segs.add(key)
                    segs.append(key)
        points = set(seen_pts)
        sub_segs = []
        for (c, u1, u2) in segs:
            cuts = self._crossings(c, u1, u2)
            bounds = [u1] + cuts + [u2]
            for t in cuts:
                points.add((c, t))
            sub_segs.extend((c, lo, hi) for lo, hi in zip(bounds, bounds[1:]))
        for (c, u) in sorted(points, key=lambda k: (k[1], k[0])):
            self._point_cells(c, u)
        for (c, lo, hi) in sorted(sub_segs, key=lambda k: (k[1], k[0])):
            self._segment_cells(c, lo, hi)

    def _seg_functions(self, c, u1) -> List[Monomial]:
        fs = {T_MONO, ZERO_MONO}
        for term in self.terms:
            fs.add(term.on_segment(c, u1, self.dist))
        return sorted(fs, key=lambda m: (m.rho, m.g))

    def _crossings(self, c, u1, u2) -> List[Radius]:
        fs = self._seg_functions(c, u1)
        cuts = set()
        for f1, f2 in itertools.combinations(fs, 2):
            x = f1.crossing(f2)
            # only crossings at or below the hull coordinate bound a cell
            if x is not None and u1 < x < u2 and f1(x) <= x:
                cuts.add(x)
        return sorted(cuts)

    def _add(self, cell: Cell, col):
        cell.member = self.holds_at(cell.c, cell.t_rep, cell.r_rep)
        self.cells.append(cell)
        if col is not None:
            self.columns.setdefault(col, []).append(cell)
        return cell

    def _point_cells(self, c, u):
        if u.is_zero:
            cell = Cell("leaf", c, ZERO, ZERO, None, None, ZERO, ZERO)
            self.hull[(c, u, u)] = self._add(cell, None)
            return
        self.hull[(c, u, u)] = self._add(Cell("hpt", c, u, u, None, None, u, u), None)
        D = self.profile(c, u)
        vals = {ZERO}
        for term in self.terms:
            v = term.eval(D)
            if v < u:
                vals.add(v)
        vals = sorted(vals)
        col = ("pt", c, u)
        for i, v in enumerate(vals):
            self._add(Cell("alevel", c, u, u, const(v), const(v), u, v), col)
            top = vals[i + 1] if i + 1 < len(vals) else u
            self._add(Cell("aband", c, u, u, const(v), const(top), u, between(v, top)), col)

    def _segment_cells(self, c, lo, hi):
        tm = between(lo, hi)
        self.hull[(c, lo, hi)] = self._add(Cell("hseg", c, lo, hi, None, None, tm, tm), None)
        fs = {}
        for f in self._seg_functions(c, lo):
            v = f(tm)
            if v < tm and v not in fs:
                fs[v] = f
        order = [fs[v] for v in sorted(fs)]
        col = ("seg", c, lo, hi)
        for i, f in enumerate(order):
            self._add(Cell("graph", c, lo, hi, f, f, tm, f(tm)), col)
            top = order[i + 1] if i + 1 < len(order) else T_MONO
            self._add(Cell("band", c, lo, hi, f, top, tm, between(f(tm), top(tm))), col)

    # queries --------------------------------------------------------------
    def below(self, cell: Cell, c, t) -> bool:
        """Whether the cell's hull location lies in D(c, t) strictly below eta(c, t)."""
        if self.dist(cell.c, c) > t:
            return False
        if cell.kind in ("alevel", "aband"):
            return cell.lo <= t
        if cell.lo == cell.hi:
            return cell.lo < t
        return cell.hi <= t

    def is_empty(self) -> bool:
        return not any(c.member for c in self.cells)


# --------------------------------------------------------------------------
# emission of pieces
# --------------------------------------------------------------------------


def _tube_center(dec: Decomposition, c: Fraction, t: Radius, holes: Sequence[Fraction]) -> Fraction:
    """A centre a with |a - c| <= t lying in none of the holes, when one is rational."""
    cfg = dec.cfg
    if not any(dec.dist(c, b) < t for b in holes):
        return c
    if t.is_exp and t.q.denominator == 1:
        n = int(t.q)
        scale = Fraction(cfg.p) ** (-n)
        used = set()
        for b in holes:
            if dec.dist(c, b) < t:
                used.add(0)
            else:
                used.add(cfg.residue((b - c) / scale))
        for u in range(1, cfg.p):
            if u not in used:
                return c + u * scale
    return c


def _hole_reps(dec: Decomposition, c: Fraction, t: Radius) -> Tuple[Fraction, ...]:
    reps: List[Fraction] = []
    for a in dec.C:
        if dec.dist(a, c) <= t and not any(dec.dist(a, b) < t for b in reps):
            reps.append(a)
    return tuple(reps)


def _runs(cells: List[Cell]) -> List[List[Cell]]:
    runs, cur = [], []
    for cell in cells:
        if cell.member:
            cur.append(cell)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _emit_attached(run: List[Cell], a, s, holes) -> List[Basic]:
    out: List[Basic] = []
    first, last = run[0], run[-1]
    if len(run) == 1 and first.kind == "alevel":
        return [R4(a, s, holes, first.f_lo.rho)]
    if first.kind == "alevel":
        out.append(R4(a, s, holes, first.f_lo.rho))
    lo = first.f_lo.rho
    hi = last.f_hi.rho if last.kind == "aband" else last.f_lo.rho
    out.append(R5(a, s, holes, lo, hi))
    if last.kind == "alevel" and len(run) > 1:
        out.append(R4(a, s, holes, last.f_lo.rho))
    return out


def _emit_column(run: List[Cell]) -> List[Basic]:
    first, last = run[0], run[-1]
    c, lo, hi = first.c, first.lo, first.hi
    if len(run) == 1 and first.kind == "graph":
        f = first.f_lo
        return [R2(c, lo, hi, f.rho, f.g)]
    out: List[Basic] = []
    if first.kind == "graph":
        out.append(R2(c, lo, hi, first.f_lo.rho, first.f_lo.g))
    f1 = first.f_lo
    f2 = last.f_hi if last.kind == "band" else last.f_lo
    out.append(R3(c, lo, hi, f1.rho, f1.g, f2.rho, f2.g))
    if last.kind == "graph" and len(run) > 1:
        out.append(R2(c, lo, hi, last.f_lo.rho, last.f_lo.g))
    return out


def _r_profile(cells: List[Cell]) -> Optional[List[Tuple[bool, Radius, Radius, bool]]]:
    """Membership of a region as a function of r alone, if it is one.

    Returns the elementary r-pieces in increasing order as
    ``(is_point, lo, hi, member)``, or None when two cells over the same
    radius disagree.
    """
    ends = set()
    ranges = []
    for cell in cells:
        lo, hi, is_pt = cell.r_range()
        ranges.append((lo, hi, is_pt, cell.member))
        ends.add(lo)
        ends.add(hi)
    V = sorted(ends)
    index = {v: i for i, v in enumerate(V)}
    val: Dict[Tuple[int, bool], bool] = {}
    for lo, hi, is_pt, m in ranges:
        i, j = index[lo], index[hi]
        if is_pt:
            keys = [(i, True)]
        else:
            keys = [(k, False) for k in range(i, j)] + [(k, True) for k in range(i + 1, j)]
        for key in keys:
            if val.setdefault(key, m) != m:
                return None
    out = []
    for i, v in enumerate(V):
        if (i, True) in val:
            out.append((True, v, v, val[(i, True)]))
        if (i, False) in val:
            out.append((False, v, V[i + 1], val[(i, False)]))
    return out


def _emit_profile(prof, level, band) -> List[Basic]:
    """Coalesce member runs of an r-profile into level/band pieces."""
    out: List[Basic] = []
    run: list = []
    for item in prof + [(True, None, None, False)]:
        if item[3] and (not run or run[-1][2] == item[1]):
            run.append(item)
            continue
        if run:
            first, last = run[0], run[-1]
            if first[0]:
                out.append(level(first[1]))
            if len(run) > 1 or not first[0]:
                out.append(band(first[1], last[2]))
                if last[0]:
                    out.append(level(last[1]))
        run = [item] if item[3] else []
    return out


def _absorb(dec: Decomposition, removed: set) -> List[Basic]:
    """Replace whole discs (and the whole line) on which membership depends on r only."""
    out: List[Basic] = []
    live = dec.cells
    if any(c.member for c in live):
        prof = _r_profile(live)
        if prof is not None:
            a = dec.C[0]
            for cell in live:
                removed.add(id(cell))
            return _emit_profile(
                prof, lambda v: R6(a, INF, v), lambda lo, hi: R7(a, INF, lo, hi)
            )
    pts = [k for k in dec.columns if k[0] == "pt"]
    pts.sort(key=lambda k: (k[2], k[1]), reverse=True)
    done: List[Tuple[Fraction, Radius, bool]] = []

    def covered(c, t):
        for c0, t0, closed in done:
            d = dec.dist(c, c0)
            if t < t0 and (d <= t0 if closed else d < t0):
                return True
        return False

    for (_, c, t) in pts:
        if covered(c, t):
            continue
        below = [cell for cell in live if id(cell) not in removed and dec.below(cell, c, t)]
        if not any(cell.member for cell in below):
            continue
        prof = _r_profile(below)
        if prof is not None:
            done.append((c, t, True))
            for cell in below:
                removed.add(id(cell))
            out.extend(
                _emit_profile(
                    prof,
                    lambda v, c=c, t=t: R4(c, t, (), v),
                    lambda lo, hi, c=c, t=t: R5(c, t, (), lo, hi),
                )
            )
            continue
        for b in _hole_reps(dec, c, t):
            inner = [
                cell for cell in below
                if cell.kind not in ("alevel", "aband") or cell.lo < t
            ]
            inner = [cell for cell in inner if dec.dist(cell.c, b) < t]
            if not any(cell.member for cell in inner):
                continue
            prof = _r_profile(inner)
            if prof is None:
                continue
            done.append((b, t, False))
            for cell in inner:
                removed.add(id(cell))
            out.extend(
                _emit_profile(
                    prof,
                    lambda v, b=b, t=t: R6(b, t, v),
                    lambda lo, hi, b=b, t=t: R7(b, t, lo, hi),
                )
            )
    return out


def _chain_hull(dec: Decomposition, removed: set) -> List[Basic]:
    pts = {}
    segs = []
    out: List[Basic] = []
    for key, cell in dec.hull.items():
        if id(cell) in removed or not cell.member:
            continue
        if cell.kind in ("leaf", "hpt"):
            pts[(cell.c, cell.lo)] = cell
        else:
            segs.append(cell)
    seg_by_bottom = {(dec.canon(s.c, s.lo), s.lo): s for s in segs}
    used = set()
    for s in sorted(segs, key=lambda s: (s.lo, s.c)):
        if id(s) in used:
            continue
        used.add(id(s))
        c, lo, hi = s.c, s.lo, s.hi
        while hi.finite:
            pkey = (dec.canon(c, hi), hi)
            nxt = seg_by_bottom.get(pkey)
            if pkey not in pts or nxt is None or id(nxt) in used:
                break
            used.add(id(nxt))
            del pts[pkey]
            hi = nxt.hi
        out.append(R1(c, lo, hi))
    for (c, u), cell in pts.items():
        out.append(R0(c, u))
    return out


def normalize(pred: Predicate, cfg: FieldConfig = DEFAULT_FIELD, merge: bool = True) -> RadialSet:
    dec = Decomposition(pred, cfg)
    return from_decomposition(dec, merge)


def from_decomposition(dec: Decomposition, merge: bool = True) -> RadialSet:
    removed: set = set()
    pieces: List[Basic] = []
    if merge:
        pieces.extend(_absorb(dec, removed))
    for key, col in dec.columns.items():
        live = [cell for cell in col if id(cell) not in removed]
        if not live:
            continue
        if key[0] == "pt":
            _, c, t = key
            holes = _hole_reps(dec, c, t)
            a = _tube_center(dec, c, t, holes)
            for run in _runs(live):
                pieces.extend(_emit_attached(run, a, t, holes))
        else:
            for run in _runs(live):
                pieces.extend(_emit_column(run))
    if merge:
        pieces.extend(_chain_hull(dec, removed))
    else:
        for cell in dec.hull.values():
            if cell.member:
                if cell.kind == "hseg":
                    pieces.append(R1(cell.c, cell.lo, cell.hi))
                else:
                    pieces.append(R0(cell.c, cell.lo))
    pieces.sort(key=lambda p: (p.a, p.lower(), p.kind))
    return RadialSet(tuple(pieces))


def bool_normalize(expr: Predicate, cfg: FieldConfig = DEFAULT_FIELD) -> RadialSet:
    return normalize(expr, cfg)


def is_empty(A: Predicate, cfg: FieldConfig = DEFAULT_FIELD) -> bool:
    return Decomposition(A, cfg).is_empty()


def is_empty_equals(A: Predicate, B: Predicate, cfg: FieldConfig = DEFAULT_FIELD) -> Dict[str, bool]:
    return {"empty_A": is_empty(A, cfg), "equal": is_empty(Xor((A, B)), cfg)}


def set_equal(A: Predicate, B: Predicate, cfg: FieldConfig = DEFAULT_FIELD) -> bool:
    return is_empty(Xor((A, B)), cfg)


def max_overlap(preds: Sequence[Predicate], cfg: FieldConfig = DEFAULT_FIELD) -> int:
    """Largest number of the given sets sharing a point (exact)."""
    dec = Decomposition(Union(tuple(preds)), cfg)
    best = 0
    for cell in dec.cells:
        D = dec.profile(cell.c, cell.t_rep)
        best = max(best, sum(1 for p in preds if p.holds(D, cell.r_rep)))
    return best


def _support(p: Basic):
    """Supersets of the values of D(a) and of r on a piece.

    Both are returned as (lo, lo_incl, hi, hi_incl).
    """
    k = p.kind
    if k == "R0":
        return (ZERO, True, p.s, True), (p.s, True, p.s, True)
    if k == "R1":
        return (p.s1, False, p.s2, False), (p.s1, False, p.s2, False)
    if k in ("R2", "R3"):
        m_lo = p.m1
        m_hi = p.m1 if k == "R2" else p.m2
        ends_lo = (mono_limit(m_lo, p.s1), mono_limit(m_lo, p.s2))
        ends_hi = (mono_limit(m_hi, p.s1), mono_limit(m_hi, p.s2))
        lo, hi = min(ends_lo), max(ends_hi)
        point = k == "R2" and lo == hi
        return (p.s1, False, p.s2, False), (lo, point, hi, point)
    if k in ("R4", "R5"):
        dr = (ZERO, True, p.s, True)
    else:
        dr = (ZERO, True, p.s, False)
    if k in ("R4", "R6"):
        return dr, (p.s1, True, p.s1, True)
    return dr, (p.s1, False, p.s2, False)


def _constraints(p: Basic):
    dr, rr = _support(p)
    out = [(p.a, dr)]
    # a point of a tube with holes has D(b) = s for every hole b
    for b in getattr(p, "holes", ()):
        out.append((b, (p.s, True, p.s, True)))
    return out, rr


def _iv_apart(i1, i2) -> bool:
    lo1, li1, hi1, hi1i = i1
    lo2, li2, hi2, hi2i = i2
    if hi1 < lo2 or (hi1 == lo2 and not (hi1i and li2)):
        return True
    return hi2 < lo1 or (hi2 == lo1 and not (hi2i and li1))


def _transfer(iv, d: Radius):
    """Range of D(b) implied by a range of D(a) when |a - b| = d (or None)."""
    lo, li, hi, hii = iv
    if d < lo or (d == lo and not li):
        return iv
    if hi < d or (hi == d and not hii):
        return (d, True, d, True)
    return None


def _apart(p: Basic, q: Basic, cfg: FieldConfig) -> bool:
    """Cheap sufficient condition for disjointness of two basic pieces."""
    cp, rp = _constraints(p)
    cq, rq = _constraints(q)
    if _iv_apart(rp, rq):
        return True
    for a1, i1 in cp:
        for a2, i2 in cq:
            implied = _transfer(i1, cfg.abs(a1 - a2))
            if implied is not None and _iv_apart(implied, i2):
                return True
    return False


def pairwise_disjoint(preds: Sequence[Predicate], cfg: FieldConfig = DEFAULT_FIELD) -> bool:
    """Every pairwise intersection is empty (decided exactly)."""
    for p, q in itertools.combinations(preds, 2):
        if isinstance(p, Basic) and isinstance(q, Basic) and _apart(p, q, cfg):
            continue
        if not is_empty(Inter((p, q)), cfg):
            return False
    return True


def covers(preds: Sequence[Predicate], cfg: FieldConfig = DEFAULT_FIELD) -> bool:
    return set_equal(Union(tuple(preds)), Everything(), cfg)


# --------------------------------------------------------------------------
# expression files
# --------------------------------------------------------------------------

_OPS = {"union": Union, "inter": Inter}


def expr_from_json(obj) -> Predicate:
    if isinstance(obj, list):
        return RadialSet.from_json(obj)
    if not isinstance(obj, dict):
        raise ValidationError(f"bad set expression {obj!r}")
    if "op" in obj:
        op = obj["op"]
        args = [expr_from_json(a) for a in obj.get("args", [])]
        if op in _OPS:
            return _OPS[op](tuple(args))
        if op == "diff":
            if len(args) != 2:
                raise ValidationError("diff takes two arguments")
            return Diff(args[0], args[1])
        if op == "compl":
            if len(args) != 1:
                raise ValidationError("compl takes one argument")
            return Compl(args[0])
        raise ValidationError(f"unknown op {op!r}")
    if "pieces" in obj:
        return RadialSet.from_json(obj)
    if "brick" in obj:
        return brick_from_json(obj)
    return basic_from_json(obj)


# --------------------------------------------------------------------------
# bricks and Swiss cheeses
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Brick(Predicate):
    kind = "B?"

    def as_radial(self) -> RadialSet:
        return RadialSet(tuple(self.skeleton().pieces + self.minus_skeleton().pieces))

    def to_json(self):
        out = {"brick": self.kind}
        for k, v in self.__dict__.items():
            if isinstance(v, Radius):
                out[k] = v.to_json()
            elif isinstance(v, tuple):
                out[k] = [fmt_rational(b) for b in v]
            else:
                out[k] = fmt_rational(v)
        return out


@dataclass(frozen=True)
class B0(Brick):
    a: Fraction
    kind = "B0"

    def centers(self):
        return (self.a,)

    def holds(self, D, r):
        return r.is_zero and D(self.a).is_zero

    def skeleton(self):
        return RadialSet()

    def minus_skeleton(self):
        return RadialSet((R0(self.a, ZERO),))


@dataclass(frozen=True)
class B1(Brick):
    a: Fraction
    s: Radius
    kind = "B1"

    def __post_init__(self):
        if self.s.is_zero:
            raise ValidationError("an open disc has nonzero radius")

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s,)

    def holds(self, D, r):
        return D(self.a) < self.s

    def skeleton(self):
        return RadialSet()

    def minus_skeleton(self):
        return RadialSet((R6(self.a, self.s, ZERO), R7(self.a, self.s, ZERO, self.s)))


@dataclass(frozen=True)
class B2(Brick):
    a: Fraction
    s1: Radius
    s2: Radius
    kind = "B2"

    def centers(self):
        return (self.a,)

    def thresholds(self):
        return (self.s1, self.s2)

    def holds(self, D, r):
        return self.s1 < D(self.a) < self.s2

    def skeleton(self):
        return RadialSet((R1(self.a, self.s1, self.s2),))

    def minus_skeleton(self):
        return RadialSet(
            (
                R2(self.a, self.s1, self.s2, ZERO, Fraction(0)),
                R3(self.a, self.s1, self.s2, ZERO, Fraction(0), ONE, Fraction(1)),
            )
        )


@dataclass(frozen=True)
class B3(Brick):
    a: Fraction
    s: Radius
    holes: Tuple[Fraction, ...] = ()
    kind = "B3"

    def __post_init__(self):
        if not self.s.is_exp:
            raise ValidationError("a tube has radius in the value group")

    def centers(self):
        return (self.a,) + self.holes

    def thresholds(self):
        return (self.s,)

    def holds(self, D, r):
        return D(self.a) <= self.s and all(D(b) >= self.s for b in self.holes)

    def skeleton(self):
        return RadialSet((R0(self.a, self.s),))

    def minus_skeleton(self):
        return RadialSet(
            (R4(self.a, self.s, self.holes, ZERO), R5(self.a, self.s, self.holes, ZERO, self.s))
        )


BRICK_KINDS = {c.kind: c for c in (B0, B1, B2, B3)}


def brick_from_json(obj) -> Brick:
    try:
        cls = BRICK_KINDS[obj["brick"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"unknown brick {obj!r}") from exc
    kwargs = {}
    for name in cls.__dataclass_fields__:
        if name not in obj:
            if name == "holes":
                continue
            raise ValidationError(f"{obj['brick']}: missing field {name!r}")
        v = obj[name]
        if name == "a":
            kwargs[name] = as_fraction(str(v))
        elif name == "holes":
            kwargs[name] = tuple(as_fraction(str(b)) for b in v)
        else:
            kwargs[name] = Radius.from_json(v)
    return cls(**kwargs)


def brick_ops(b: Brick) -> Dict[str, RadialSet]:
    return {"skeleton": b.skeleton(), "as_radial": b.as_radial(), "minus_skeleton": b.minus_skeleton()}


@dataclass(frozen=True)
class Disc:
    kind: str  # "closed" | "open"
    a: Fraction
    r: Radius

    def lift_holds(self, D: Profile) -> bool:
        d = D(self.a)
        return d <= self.r if self.kind == "closed" else d < self.r

    def k_contains(self, x: Fraction, cfg: FieldConfig) -> bool:
        d = cfg.abs(x - self.a)
        return d <= self.r if self.kind == "closed" else d < self.r

    def to_json(self):
        return {"kind": self.kind, "a": fmt_rational(self.a), "r": self.r.to_json()}

    @staticmethod
    def from_json(obj) -> "Disc":
        kind = obj.get("kind", "closed")
        if kind not in ("closed", "open"):
            raise ValidationError(f"bad disc kind {kind!r}")
        return Disc(kind, as_fraction(str(obj["a"])), Radius.from_json(obj["r"]))


@dataclass(frozen=True)
class SwissCheese(Predicate):
    """outer minus the union of inner discs; ``outer=None`` is the whole line."""

    outer: Optional[Disc]
    inner: Tuple[Disc, ...] = ()

    def centers(self):
        out = [d.a for d in self.inner]
        if self.outer is not None:
            out.append(self.outer.a)
        return out

    def thresholds(self):
        out = [d.r for d in self.inner]
        if self.outer is not None:
            out.append(self.outer.r)
        return out

    def holds(self, D, r):
        if self.outer is not None and not self.outer.lift_holds(D):
            return False
        return not any(d.lift_holds(D) for d in self.inner)

    def k_contains(self, x: Fraction, cfg: FieldConfig) -> bool:
        if self.outer is not None and not self.outer.k_contains(x, cfg):
            return False
        return not any(d.k_contains(x, cfg) for d in self.inner)

    def validate(self, cfg: FieldConfig):
        discs = list(self.inner)
        for d in discs:
            if d.kind == "open" and d.r.is_zero:
                raise ValidationError("open discs need positive radius")
            if self.outer is not None:
                inside = BPoint(d.a, d.r, cfg).le(BPoint(self.outer.a, self.outer.r, cfg))
                if not inside or (d.kind == self.outer.kind and BPoint(d.a, d.r, cfg) == BPoint(self.outer.a, self.outer.r, cfg)):
                    raise ValidationError(f"inner disc {d} not properly inside the outer disc")
        for d1, d2 in itertools.combinations(discs, 2):
            if _discs_meet(d1, d2, cfg):
                raise ValidationError(f"inner discs {d1} and {d2} intersect")

    def to_json(self):
        return {
            "outer": None if self.outer is None else self.outer.to_json(),
            "inner": [d.to_json() for d in self.inner],
        }

    @staticmethod
    def from_json(obj) -> "SwissCheese":
        outer = obj.get("outer")
        return SwissCheese(
            None if outer in (None, "line") else Disc.from_json(outer),
            tuple(Disc.from_json(d) for d in obj.get("inner", [])),
        )


def _discs_meet(d1: Disc, d2: Disc, cfg: FieldConfig) -> bool:
    """Whether two discs of k (closed or open) share a point of k-bar."""
    small, big = (d1, d2) if d1.r <= d2.r else (d2, d1)
    # ultrametric: the smaller disc meets the larger iff its centre lies in it
    return big.k_contains(small.a, cfg)


def cheese_bricks(ch: SwissCheese, cfg: FieldConfig = DEFAULT_FIELD) -> List[Brick]:
    """A brick partition of the lift of one Swiss cheese."""
    pts: List[BPoint] = []
    outer_pt = None
    if ch.outer is not None:
        outer_pt = BPoint(ch.outer.a, ch.outer.r, cfg)
        pts.append(outer_pt)
    closed_b = set()
    open_b = {}
    for d in ch.inner:
        q = BPoint(d.a, d.r, cfg)
        pts.append(q)
        if d.kind == "closed":
            closed_b.add(q)
        else:
            open_b[q] = d.a
    if not pts:
        return [B1(Fraction(0), INF)]
    if not ch.inner:
        if ch.outer.kind == "closed":
            return [B3(ch.outer.a, ch.outer.r, ())]
        return [B1(ch.outer.a, ch.outer.r)]
    # keep the first representative of each node (outer disc first)
    V: List[BPoint] = []
    for v in pts + join_closure(pts):
        if v not in V:
            V.append(v)
    V.sort(key=BPoint.sort_key)
    bricks: List[Brick] = []

    def parent(v):
        best = None
        for w in V:
            if v.le(w) and not v == w and (best is None or w.le(best)):
                best = w
        return best

    def children(v):
        return [w for w in V if parent(w) == v]

    for v in V:
        w = parent(v)
        if w is not None:
            bricks.append(B2(v.a, v.r, w.r))
        elif ch.outer is None:
            bricks.append(B2(v.a, v.r, INF))
        if v in closed_b:
            continue
        if outer_pt is not None and v == outer_pt and ch.outer.kind == "open":
            continue
        holes = [ch_.a for ch_ in children(v)]
        if v in open_b:
            holes.append(open_b[v])
        a = _free_center(v, holes, cfg)
        bricks.append(B3(a, v.r, tuple(holes)))
    return bricks


def _free_center(v: BPoint, holes: Sequence[Fraction], cfg: FieldConfig) -> Fraction:
    t = v.r
    cands = [v.a]
    if t.is_exp and t.q.denominator == 1:
        scale = Fraction(cfg.p) ** (-int(t.q))
        cands += [v.a + u * scale for u in range(1, cfg.p)]
    for c in cands:
        if all(cfg.abs(c - b) >= t for b in holes):
            return c
    return v.a


def cheese_to_bricks(inp, cfg: FieldConfig = DEFAULT_FIELD) -> Dict[str, list]:
    """Lift cheeses to B and cut the lifts into bricks.

    ``inp`` is one :class:`SwissCheese` or a list of cheeses that must
    partition k (checked on the lifts, exactly).
    """
    cheeses = [inp] if isinstance(inp, SwissCheese) else list(inp)
    for ch in cheeses:
        ch.validate(cfg)
    if not isinstance(inp, SwissCheese):
        if not pairwise_disjoint(cheeses, cfg):
            raise ValidationError("cheeses are not pairwise disjoint")
        if not covers(cheeses, cfg):
            raise ValidationError("cheeses do not cover the line")
    lifts = [normalize(ch, cfg) for ch in cheeses]
    bricks: List[Brick] = []
    for ch in cheeses:
        bricks.extend(cheese_bricks(ch, cfg))
    return {"lift": lifts, "bricks": bricks}
