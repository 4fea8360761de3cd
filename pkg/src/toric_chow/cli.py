"""Command-line entry point: ``toric-chow {validate,quotient,trace,polytope,render}``.

Data goes to stdout (or --out), diagnostics to stderr.  Exit codes:
0 ok, 1 invalid fan, 2 parse error, 3 imprimitive direction, 4 non-simplicial
anchor (report still written), 5 polytope not full-dimensional, 6 render
input not of rank 2.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import formats
from .chow import enumerate_strata, trace_chain
from .errors import (
    InvalidFan,
    NotComplete,
    NotFullDimensional,
    NotLatticePolytope,
    NotPrimitive,
    RankMismatch,
    ToricError,
    ZeroVector,
)
from .fan import cone_over_polytope_monoid, normal_fan, validate_fan, vertex_chart_monoid
from .lattice import LatticeVector, primitive_vector, quotient_lattice
from .svg import RenderError, render

log = logging.getLogger("toric_chow")

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_IMPRIMITIVE, EXIT_NONSIMPLICIAL, EXIT_NOT_FULL, EXIT_RANK = range(7)
LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class CliExit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path):
    try:
        if path == "-":
            return formats.load_json(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return formats.load_json(fh)
    except OSError as exc:
        raise CliExit(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    except formats.DocumentError as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv(text, what):
    try:
        return [formats.rational_in(x) for x in text.split(",") if x.strip()]
    except formats.DocumentError as exc:
        raise CliExit(EXIT_PARSE, f"bad {what} {text!r}: {exc}") from None


def _load_fan(path):
    doc = _read(path)
    try:
        return validate_fan(formats.fan_from_doc(doc))
    except formats.DocumentError as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None
    except (InvalidFan, TypeError) as exc:
        raise CliExit(EXIT_INVALID, f"invalid fan: {exc}") from None


def _direction(args, fan):
    values = _csv(args.direction, "direction")
    if any(v.denominator != 1 for v in values):
        raise CliExit(EXIT_PARSE, "direction must be integral")
    n0 = LatticeVector(int(v) for v in values)
    if len(n0) != fan.rank:
        raise CliExit(EXIT_PARSE, f"direction has rank {len(n0)}, fan has rank {fan.rank}")
    if n0.is_zero():
        raise CliExit(EXIT_PARSE, "direction must be nonzero")
    _, k = primitive_vector(n0)
    if k != 1 and not args.allow_imprimitive:
        raise CliExit(EXIT_IMPRIMITIVE, f"direction {tuple(n0)} is not primitive (use --allow-imprimitive)")
    if not fan.complete:
        raise CliExit(EXIT_INVALID, "fan is not complete")
    return n0


def cmd_validate(args):
    doc = _read(args.path)
    try:
        fan = validate_fan(formats.fan_from_doc(doc))
    except formats.DocumentError as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None
    except (InvalidFan, TypeError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"valid: true\ncomplete: {str(fan.complete).lower()}\nrays: {len(fan.rays)}\n"
          f"maximal cones: {len(fan.max_cones)}\nsmooth: {str(fan.is_smooth).lower()}")
    return EXIT_OK


def cmd_quotient(args):
    fan = _load_fan(args.fan)
    n0 = _direction(args, fan)
    report = enumerate_strata(fan, n0, allow_imprimitive=args.allow_imprimitive)
    _write(formats.dumps(formats.report_to_doc(report)), args.out)
    if report.discrete_data is None:
        for notice in report.notices:
            print(f"notice: {notice}", file=sys.stderr)
        return EXIT_NONSIMPLICIAL
    return EXIT_OK


def cmd_trace(args):
    fan = _load_fan(args.fan)
    n0 = _direction(args, fan)
    n0 = primitive_vector(n0)[0]
    point = _csv(args.point, "point")
    if len(point) != fan.rank - 1:
        raise CliExit(EXIT_PARSE, f"point must have rank {fan.rank - 1}")
    chain = trace_chain(fan, n0, point, quotient_lattice(fan.rank, n0))
    _write(formats.dumps(formats.chain_to_doc(chain)), args.out)
    return EXIT_OK


def cmd_polytope(args):
    doc = _read(args.polytope)
    try:
        q = formats.polytope_from_doc(doc)
    except (formats.DocumentError, NotLatticePolytope, RankMismatch, TypeError) as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None
    if not q.full_dimensional:
        raise CliExit(EXIT_NOT_FULL, "polytope is not full-dimensional")
    if args.emit == "fan":
        out = formats.fan_to_doc(normal_fan(q))
    elif args.emit == "monoid":
        graded = cone_over_polytope_monoid(q)
        out = {"generators": [{"element": list(g), "degree": graded.degree(g)}
                              for g in graded.monoid.generators],
               "generated_in_degree_one": graded.generated_in_degree_one}
    else:
        out = {"charts": [{"vertex": list(v), "generators": [list(g) for g in vertex_chart_monoid(q, v).generators]}
                          for v in q.vertices]}
    _write(formats.dumps(out), args.out)
    return EXIT_OK


def cmd_render(args):
    doc = _read(args.report)
    try:
        svg = render(doc)
    except RenderError as exc:
        raise CliExit(EXIT_RANK, str(exc)) from None
    _write(svg, args.svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-chow",
                                     description="Chow quotients of toric varieties by rank-one subtori.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a fan document")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    for name, func, help_ in (("quotient", cmd_quotient, "quotient fan and boundary strata report"),
                              ("trace", cmd_trace, "chain over a single point of N'")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--fan", required=True)
        p.add_argument("--direction", required=True, help="comma-separated integer vector n0")
        p.add_argument("--allow-imprimitive", action="store_true")
        if name == "trace":
            p.add_argument("--point", required=True, help="comma-separated rationals in N'")
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("polytope", help="normal fan, graded monoid or vertex charts of a polytope")
    p.add_argument("--polytope", required=True)
    p.add_argument("--emit", choices=("fan", "monoid", "charts"), default="fan")
    p.add_argument("--out")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("render", help="SVG of a rank-2 report or chain")
    p.add_argument("--report", required=True)
    p.add_argument("--svg", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def _configure_logging(name: str) -> None:
    for handler in list(log.handlers):
        log.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(LEVELS.get(name.lower(), logging.WARNING))
    log.propagate = False


def main(argv=None) -> int:
    _configure_logging(os.environ.get("LOG_LEVEL", "warn"))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotPrimitive as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMPRIMITIVE
    except NotFullDimensional as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FULL
    except (NotComplete, ZeroVector) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
