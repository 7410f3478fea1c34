"""Command-line interface: ``berkline <command> [flags]``.

Exit codes: 0 success, 1 failed verification, 2 schema error, 3 kernel error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional

from . import acceptance
from .bline import BPoint
from .bradial import brick_from_json, expr_from_json, normalize, pairwise_disjoint
from .facade import (
    Encoded,
    Triangulation,
    build_facade,
    compile_map,
    map_transport,
    point_from_json,
    point_to_json,
    transport_case,
    transport_id,
)
from .maps import RationalMap, fiber_count, local_degree, multiplicity_locus, pushforward
from .valuation import FieldConfig, KernelError, Radius, ValidationError, fmt_rational


class SchemaError(Exception):
    """Malformed input; carries the flag (path) where it was found."""


def _load(text: str, where: str):
    """Inline JSON, or a path to a JSON file."""
    try:
        stripped = text.lstrip()
        if stripped[:1] in "{[\"" or stripped in ("true", "false", "null") or stripped[:1].isdigit():
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except OSError as exc:
        raise SchemaError(f"{where}: cannot read {text!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _parse(where: str, text: Optional[str], fn: Callable):
    if text is None:
        raise SchemaError(f"{where}: required")
    obj = _load(text, where)
    try:
        return fn(obj)
    except (ValidationError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cfg = FieldConfig(args.p)
        env = os.environ.get("BERK_SEED")
        self.seed = int(env) if env not in (None, "") else args.seed

    def point(self, text, where="--point"):
        return _parse(where, text, lambda o: point_from_json(o, self.cfg))

    def expr(self, text, where="--expr"):
        return _parse(where, text, expr_from_json)

    def map(self, text, where="--map"):
        return _parse(where, text, RationalMap.from_json)

    def tri(self, text, where="--tri") -> Triangulation:
        return _parse(where, text, lambda o: Triangulation.from_json(o, self.cfg))

    def encoded(self, text, where="--enc") -> Encoded:
        return _parse(where, text, lambda o: Encoded.from_json(o, self.cfg))


def _need_format(args, allowed: List[str]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise SchemaError(f"--format: {fmt!r} is not available for {args.command} (use {', '.join(allowed)})")
    return fmt


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_normalize(ctx: Context) -> str:
    fmt = _need_format(ctx.args, ["json", "text"])
    expr = ctx.expr(ctx.args.expr)
    rs = normalize(expr, ctx.cfg)
    pieces = list(rs)
    disjoint = pairwise_disjoint(pieces, ctx.cfg)
    if fmt == "text":
        lines = [json.dumps(p.to_json(), sort_keys=True) for p in pieces]
        lines.append(f"pieces: {len(pieces)}  disjoint: {str(disjoint).lower()}")
        return "\n".join(lines) + "\n"
    return _dump({"pieces": [p.to_json() for p in pieces], "count": len(pieces), "disjoint": disjoint})


def cmd_member(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    return _dump(ctx.expr(ctx.args.expr).member(ctx.point(ctx.args.point)))


def cmd_image(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    y = pushforward(ctx.map(ctx.args.map), ctx.point(ctx.args.point), ctx.cfg)
    return _dump(point_to_json(y))


def cmd_degree(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    return _dump(local_degree(ctx.map(ctx.args.map), ctx.point(ctx.args.point)))


def cmd_locus(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    region = None
    if ctx.args.region:
        region = _parse("--region", ctx.args.region, lambda o: [brick_from_json(b) for b in o])
    rep = multiplicity_locus(ctx.map(ctx.args.map), ctx.args.d, region, ctx.cfg)
    return _dump(rep.to_json())


def cmd_fiber(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    centers = None
    if ctx.args.centers:
        centers = _parse("--centers", ctx.args.centers, lambda o: [Fraction(str(c)) for c in o])
    y = ctx.point(ctx.args.point)
    if not isinstance(y, BPoint):
        raise SchemaError("--point: fibres need a finite point")
    res = fiber_count(ctx.map(ctx.args.map), y, centers)
    return _dump({"count": res["count"], "fiber": [x.to_json() for x in res["fiber"]], "degrees": res["degrees"]})


def cmd_skeleton(ctx: Context) -> str:
    fmt = _need_format(ctx.args, ["json", "dot"])
    tri = ctx.tri(ctx.args.tri)
    if ctx.args.dot:
        Path(ctx.args.dot).write_text(tri.to_dot())
    return tri.to_dot() if fmt == "dot" else _dump(tri.graph_json())


def cmd_facade(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    return _dump(build_facade(ctx.tri(ctx.args.tri), reduce=ctx.args.reduce).to_json())


def cmd_encode(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    F = build_facade(ctx.tri(ctx.args.tri))
    return _dump(F.encode(ctx.point(ctx.args.point)).to_json())


def cmd_decode(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    F = build_facade(ctx.tri(ctx.args.tri))
    e = ctx.encoded(ctx.args.enc)
    try:
        y = F.decode(e)
    except ValidationError as exc:
        raise SchemaError(f"--enc: {exc}") from exc
    return _dump(point_to_json(y))


def cmd_transport(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    F = build_facade(ctx.tri(ctx.args.tri))
    G = build_facade(ctx.tri(ctx.args.tri2, "--tri2")) if ctx.args.tri2 else F
    e = ctx.encoded(ctx.args.enc)
    if ctx.args.map:
        return _dump({"encoded": map_transport(ctx.map(ctx.args.map), F, G, e).to_json()})
    return _dump({"case": transport_case(F, G, e), "encoded": transport_id(F, G, e).to_json()})


def cmd_compile_map(ctx: Context) -> str:
    _need_format(ctx.args, ["json"])
    F = build_facade(ctx.tri(ctx.args.tri))
    G = build_facade(ctx.tri(ctx.args.tri2, "--tri2")) if ctx.args.tri2 else F
    return _dump(compile_map(ctx.map(ctx.args.map), F, G))


def sample_lattice(cfg: FieldConfig) -> List[BPoint]:
    """32 x 32 lattice: a = m/8 for m in [-16, 15], r = p^(k/4) for k in [-16, 15]."""
    return [BPoint(Fraction(m, 8), Radius.exp(Fraction(k, 4)), cfg) for m in range(-16, 16) for k in range(-16, 16)]


def _radius_cell(r: Radius) -> str:
    # the exponent q of r = p^q, or "zero"
    return "zero" if r.is_zero else fmt_rational(r.q)


def cmd_sample(ctx: Context) -> str:
    _need_format(ctx.args, ["csv"])
    expr = ctx.expr(ctx.args.expr)
    if ctx.args.samples:
        rng = random.Random(ctx.seed)
        pts = [acceptance.random_bpoint(rng, ctx.cfg) for _ in range(ctx.args.samples)]
    else:
        pts = sample_lattice(ctx.cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "r", "member"])
    for x in pts:
        w.writerow([x.to_json()["a"], _radius_cell(x.r), int(expr.member(x))])
    return buf.getvalue()


def cmd_verify(ctx: Context) -> str:
    fmt = _need_format(ctx.args, ["text", "json"])
    nums = None
    if ctx.args.criteria:
        try:
            nums = [int(k) for k in ctx.args.criteria.split(",")]
        except ValueError as exc:
            raise SchemaError(f"--criteria: {exc}") from exc
        bad = [k for k in nums if k not in acceptance.CHECKS]
        if bad:
            raise SchemaError(f"--criteria: unknown criteria {bad}")
    results = acceptance.run_all(ctx.seed, nums)
    ctx.failed = not all(r.ok for r in results)
    if fmt == "json":
        return _dump([{"criterion": r.number, "name": r.name, "ok": r.ok, "detail": r.detail} for r in results])
    return "".join(r.line() + "\n" for r in results)


COMMANDS = {
    "normalize": cmd_normalize,
    "member": cmd_member,
    "image": cmd_image,
    "degree": cmd_degree,
    "locus": cmd_locus,
    "fiber": cmd_fiber,
    "skeleton": cmd_skeleton,
    "facade": cmd_facade,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "transport": cmd_transport,
    "compile-map": cmd_compile_map,
    "sample": cmd_sample,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="residue characteristic (default 2)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (BERK_SEED overrides)")
    common.add_argument("--samples", type=int, default=0, help="number of random samples")
    common.add_argument("--format", help="output format: json, text, dot or csv")

    parser = argparse.ArgumentParser(prog="berkline", description="Exact computations on the Berkovich line.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, *flags):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for flag in flags:
            sp.add_argument(flag)
        return sp

    add("normalize", "disjoint normal form of a set expression", "--expr")
    add("member", "membership of a point in a set expression", "--expr", "--point")
    add("image", "image of a point under a rational map", "--map", "--point")
    add("degree", "local degree of a map at a point", "--map", "--point")
    sp = add("locus", "points where a polynomial map has a given local degree", "--map", "--region")
    sp.add_argument("--d", type=int, required=True)
    add("fiber", "fibre of a map over a point", "--map", "--point", "--centers")
    add("skeleton", "skeleton graph of a triangulation", "--tri", "--dot")
    sp = add("facade", "facade of a triangulation", "--tri")
    sp.add_argument("--reduce", action="store_true", help="add infinity to remove the retained disc")
    add("encode", "encode a point in a facade", "--tri", "--point")
    add("decode", "decode a facade coordinate", "--tri", "--enc")
    add("transport", "move a coordinate to a refined facade or along a map", "--tri", "--tri2", "--enc", "--map")
    add("compile-map", "piecewise description of a map between facades", "--map", "--tri", "--tri2")
    add("sample", "membership CSV on a lattice or random points", "--expr")
    add("verify", "run the acceptance checks", "--criteria")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = Context(args)
        ctx.failed = False
        out = COMMANDS[args.command](ctx)
    except (SchemaError, ValidationError) as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except KernelError as exc:
        print(f"kernel error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 1 if ctx.failed else 0


if __name__ == "__main__":
    sys.exit(main())
